import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from toricpos.chow import chow_ring, degree, divisor, exp, one, total_chern_of_tangent
from toricpos.linalg import Subspace
from toricpos.sheaves import (
    DirectSum,
    EnumerationLimitError,
    Filtration,
    FiltrationFamily,
    LineBundle,
    RawChern,
    Tangent,
    UnsupportedSheafError,
    _meet_closure,
    chern_character,
    direct_sum_filtration,
    enumerate_equivariant_subsheaves,
    line_bundle_filtration,
    sheaf_rank,
    split_decomposition,
    tangent_filtration,
)
from toricpos.varieties import hirzebruch, p2_projbundle, projective_space

from conftest import CORPUS_VARIETIES

FANS = {k: v.fan for k, v in CORPUS_VARIETIES.items()}


@pytest.mark.parametrize("r", range(6))
def test_hirzebruch_tangent_chern_character(r):
    v = hirzebruch(r)
    ring = chow_ring(v.fan)
    F, H = (divisor(ring, v.divisor_coeffs(x)) for x in "FH")
    ch = chern_character(v.fan, Tangent())
    assert ch.scalar() == 2
    assert ch.component(1) == F * (2 - r) + H * 2
    # ch_2 = (c1^2 - 2 c2)/2 with c1^2 = 8 and c2 = 4
    assert degree(ch.component(2)) == 0


def test_tangent_chern_character_matches_chern_class(variety):
    fan = variety.fan
    ch = chern_character(fan, Tangent())
    c = total_chern_of_tangent(fan)
    c1, c2 = c.component(1), c.component(2)
    assert ch.component(1) == c1
    assert ch.component(2) == (c1 * c1 - c2 * 2) * Fraction(1, 2)


def test_p2_bundle_tangent_chern_character():
    v = p2_projbundle()
    ring = chow_ring(v.fan)
    F, H = (divisor(ring, v.divisor_coeffs(x)) for x in "FH")
    ch = chern_character(v.fan, Tangent())
    assert ch.component(1) == F * 2 + H * 2
    assert ch.component(2) == F * F * 2 - H * F + H * H
    assert degree(ch) == Fraction(1, 3)


@settings(max_examples=50, deadline=None)
@given(name=st.sampled_from(sorted(FANS)), seed=st.integers(0, 10 ** 6))
def test_chern_character_additive_and_multiplicative(name, seed):
    fan = FANS[name]
    rng = random.Random(seed)
    a = [rng.randint(-2, 2) for _ in fan.rays]
    b = [rng.randint(-2, 2) for _ in fan.rays]
    ring = chow_ring(fan)
    ca, cb = chern_character(fan, LineBundle(a)), chern_character(fan, LineBundle(b))
    assert chern_character(fan, DirectSum([LineBundle(a), LineBundle(b)])) == ca + cb
    assert ca * cb == chern_character(fan, LineBundle([x + y for x, y in zip(a, b)]))
    assert chern_character(fan, DirectSum([LineBundle(a), Tangent()])) == ca + chern_character(fan, Tangent())
    assert ca == exp(divisor(ring, a))


@settings(max_examples=50, deadline=None)
@given(name=st.sampled_from(sorted(FANS)), seed=st.integers(0, 10 ** 6))
def test_split_filtration_recovers_line_bundles(name, seed):
    fan = FANS[name]
    rng = random.Random(seed)
    r = rng.randint(1, 3)
    bundles = [[rng.randint(-2, 2) for _ in fan.rays] for _ in range(r)]
    family = direct_sum_filtration(bundles)
    expected = chern_character(fan, DirectSum([LineBundle(b) for b in bundles]))
    assert chern_character(fan, Filtration(family)) == expected
    split = split_decomposition(family)
    assert split is not None and len(split) == r


def test_line_bundle_filtration_roundtrip():
    fam = line_bundle_filtration([1, -2, 0, 3])
    ((_, lb),) = split_decomposition(fam)
    assert lb.coefficients == (1, -2, 0, 3)


def test_tangent_family_splitting(variety):
    # only products of projective lines have a split tangent bundle among the corpus fans
    fam = tangent_filtration(variety.fan)
    split = split_decomposition(fam)
    if variety.name.startswith("p1_product") or variety.name == "hirzebruch(0)":
        assert split is not None
        assert chern_character(variety.fan, Filtration(fam)) == chern_character(variety.fan, Tangent())
    else:
        assert split is None
        with pytest.raises(UnsupportedSheafError):
            chern_character(variety.fan, Filtration(fam))


def test_fano_threefold_tangent_chern_character():
    from toricpos.chow import canonical_divisor, cone_class
    from toricpos.varieties import p1xp1_projbundle

    fan = p1xp1_projbundle().fan
    ring = chow_ring(fan)
    expected = one(ring) * 3 - canonical_divisor(ring) + cone_class(ring, (1, 4)) \
        + cone_class(ring, (0, 1, 4)) * Fraction(2, 3)
    assert chern_character(fan, Tangent()) == expected


def test_tangent_candidates_on_p2_bundle():
    fan = p2_projbundle().fan
    cands = enumerate_equivariant_subsheaves(tangent_filtration(fan))
    dims = sorted(s.dim for s, _ in cands)
    # five ray lines, five "pairwise" planes not all distinct: 4 lines + 6 planes after dedup
    assert dims.count(1) == 4 and dims.count(2) == 6
    for s, induced in cands:
        assert induced.rank == s.dim
        assert split_decomposition(induced) is not None


def test_tangent_candidates_on_p2():
    # T_P2: the three ray lines and nothing else (no two rays span a new intersection)
    cands = enumerate_equivariant_subsheaves(tangent_filtration(projective_space(2).fan))
    assert [s.dim for s, _ in cands] == [1, 1, 1]


def test_family_validation():
    full = Subspace.full(2)
    line = Subspace.span([(1, 0)], 2)
    with pytest.raises(ValueError):
        FiltrationFamily(full, (((0, line),),))
    with pytest.raises(ValueError):
        FiltrationFamily(full, (((1, line), (0, full)),))
    with pytest.raises(ValueError):
        FiltrationFamily(full, ((),))
    fam = FiltrationFamily.build(full, [[(0, line), (2, line), (3, full)]])
    assert fam.steps == (((0, line), (3, full)),)
    assert fam.jump_index(0, [(1, 0)]) == 0 and fam.jump_index(0, [(0, 1)]) == 3


def test_raw_chern_rank_check():
    ring = chow_ring(projective_space(2).fan)
    with pytest.raises(ValueError):
        RawChern(2, one(ring))
    assert sheaf_rank(projective_space(2).fan, RawChern(1, one(ring))) == 1


def test_enumeration_cap():
    lines = [Subspace.span([(1, i, i * i)], 3) for i in range(8)]
    planes = [a + b for a in lines for b in lines if a != b]
    with pytest.raises(EnumerationLimitError):
        _meet_closure(planes + lines, cap=20)
