import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from toricpos.chow import ChowElement, chow_ring, divisor
from toricpos.varieties import hirzebruch, p1_product, p1xp1_projbundle, p2_projbundle, projective_space

# The varieties every corpus config lives on, plus a few small extras.
CORPUS_VARIETIES = {
    **{f"F{r}": hirzebruch(r) for r in range(6)},
    "P2": projective_space(2),
    "P3": projective_space(3),
    "P1xP1": p1_product(2),
    "P1^3": p1_product(3),
    "fano3": p1xp1_projbundle(),
    "p2bundle": p2_projbundle(),
}

SURFACES = [k for k, v in CORPUS_VARIETIES.items() if v.fan.rank == 2]
THREEFOLDS = [k for k, v in CORPUS_VARIETIES.items() if v.fan.rank == 3]


@pytest.fixture(params=sorted(CORPUS_VARIETIES))
def variety(request):
    return CORPUS_VARIETIES[request.param]


def small_ints(lo=-3, hi=3):
    return st.integers(min_value=lo, max_value=hi)


def divisor_coeffs(fan, lo=-3, hi=3):
    return st.lists(small_ints(lo, hi), min_size=len(fan.rays), max_size=len(fan.rays))


@st.composite
def chow_classes(draw, fan, max_coeff=3, codim=None):
    """Random rational combinations of orbit-closure classes (optionally of one codimension)."""
    ring = chow_ring(fan)
    codims = [codim] if codim is not None else range(fan.rank + 1)
    terms = {}
    for k in codims:
        for c in ring.cones[k]:
            num = draw(st.integers(-max_coeff, max_coeff))
            if num:
                den = draw(st.sampled_from([1, 1, 2, 3]))
                terms[c] = Fraction(num, den)
    return ChowElement.from_terms(ring, terms)


def random_class(fan, rng: random.Random, codim=None, max_coeff=3):
    ring = chow_ring(fan)
    codims = [codim] if codim is not None else range(fan.rank + 1)
    terms = {c: Fraction(rng.randint(-max_coeff, max_coeff), rng.choice([1, 2, 3]))
             for k in codims for c in ring.cones[k]}
    return ChowElement.from_terms(ring, terms)


def random_divisor(fan, rng: random.Random, lo=-3, hi=3):
    return [rng.randint(lo, hi) for _ in fan.rays]


def random_gaussian(rng: random.Random, bound=4):
    from toricpos.charges import GaussianRational

    return GaussianRational(Fraction(rng.randint(-bound, bound), rng.randint(1, 3)),
                            Fraction(rng.randint(-bound, bound), rng.randint(1, 3)))


def random_charge(fan, rng: random.Random):
    """A central charge with random L, random U = 1 + ..., and a valid random stability vector."""
    from toricpos.charges import CentralCharge, GaussianRational

    n = fan.rank
    ring = chow_ring(fan)
    rho = [GaussianRational(rng.randint(-3, 3) or 1, rng.randint(-3, 3))]
    for _ in range(n):
        # rho_j = rho_{j+1} * w with Im(w) > 0, built from the top index down
        w = GaussianRational(rng.randint(-3, 3), rng.randint(1, 3))
        rho.append(rho[-1] * w)
    rho.reverse()
    U = one_plus_higher(ring, rng)
    L = divisor(ring, random_divisor(fan, rng))
    return CentralCharge(tuple(rho), U, L)


def one_plus_higher(ring, rng: random.Random):
    from toricpos.chow import one

    U = one(ring)
    for k in range(1, ring.n + 1):
        U = U + random_class(ring.fan, rng, codim=k, max_coeff=2)
    return U


def random_sheaf(fan, rng: random.Random):
    from toricpos.sheaves import DirectSum, LineBundle, Tangent

    kind = rng.choice(["line", "tangent", "sum"])
    if kind == "line":
        return LineBundle(random_divisor(fan, rng))
    if kind == "tangent":
        return Tangent()
    return DirectSum([LineBundle(random_divisor(fan, rng)) for _ in range(rng.randint(2, 3))])


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
