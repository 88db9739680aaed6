import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from toricpos.charges import build_dhym_charge, charge_to_polynomial
from toricpos.chow import chow_ring, divisor, one
from toricpos.sheaves import LineBundle, Tangent, direct_sum_filtration, tangent_filtration
from toricpos.stability import (
    AlphaCondition,
    Comparison,
    ParametricValue,
    SlopeCondition,
    alpha_hilbert,
    cauchy_threshold,
    check_equivariant_stability,
    compare_asymptotic,
    slope_data,
)
from toricpos.varieties import p1_product, p2_projbundle, projective_space

coeff = st.fractions(min_value=-20, max_value=20, max_denominator=6)


@settings(max_examples=200)
@given(f=st.lists(coeff, min_size=1, max_size=5), g=st.lists(coeff, min_size=1, max_size=5))
def test_cauchy_threshold_is_valid(f, g):
    f, g = ParametricValue(f), ParametricValue(g)
    m0 = cauchy_threshold(f, g)
    cmp = compare_asymptotic(f, g)
    if m0 is None:
        assert cmp is Comparison.EQUAL
        return
    start = math.floor(m0) + 1
    for m in range(start, start + 15):
        d = g(m) - f(m)
        assert (d > 0) if cmp is Comparison.LESS else (d < 0)


def test_parametric_value_basics():
    p = ParametricValue([1, 2, 0, 0])
    assert p.coeffs == (1, 2) and p.degree == 1
    assert p(3) == 7
    assert (p * 2 - p).coeffs == p.coeffs
    assert (p / 2).serialize() == ["1/2", "1"]
    assert compare_asymptotic(ParametricValue([5, 1]), ParametricValue([0, 2])) is Comparison.LESS
    assert cauchy_threshold(ParametricValue([5, 1]), ParametricValue([0, 2])) == 6


def _alpha(v):
    ring = chow_ring(v.fan)
    F, H = (divisor(ring, v.divisor_coeffs(x)) for x in "FH")
    return (one(ring), H + F, H * F, H * H * F), F, H


def test_alpha_hilbert_polynomials_on_p2_bundle():
    v = p2_projbundle()
    alpha, F, H = _alpha(v)
    F_c, H_c = v.divisor_coeffs("F"), v.divisor_coeffs("H")
    two_h_minus_f = [2 * h - f for h, f in zip(H_c, F_c)]
    assert alpha_hilbert(v.fan, alpha, Tangent()).coeffs == (12, 26, 5, Fraction(1, 2))
    assert alpha_hilbert(v.fan, alpha, LineBundle(F_c)).coeffs == (3, Fraction(41, 6), Fraction(3, 2), Fraction(1, 6))
    assert alpha_hilbert(v.fan, alpha, LineBundle(two_h_minus_f)).coeffs == \
        (4, Fraction(53, 6), Fraction(3, 2), Fraction(1, 6))


def test_alpha_hilbert_constant_term_is_euler_characteristic():
    # with alpha_0 = 1 the constant term is chi(O(d)) = binom(d+2, 2) on P^2
    v = projective_space(2)
    ring = chow_ring(v.fan)
    H = divisor(ring, [1, 0, 0])
    for d in range(-2, 5):
        p = alpha_hilbert(v.fan, (one(ring), H, H * H), LineBundle([d, 0, 0]))
        assert p(0) == Fraction((d + 2) * (d + 1), 2)


def test_alpha_validation():
    v = projective_space(2)
    ring = chow_ring(v.fan)
    H = divisor(ring, [1, 0, 0])
    with pytest.raises(ValueError):
        alpha_hilbert(v.fan, (one(ring), H), Tangent())
    with pytest.raises(ValueError):
        alpha_hilbert(v.fan, (one(ring), H * H, H), Tangent())


def test_p2_bundle_tangent_verdicts():
    v = p2_projbundle()
    alpha, F, H = _alpha(v)
    fam = tangent_filtration(v.fan)
    rep = check_equivariant_stability(v.fan, AlphaCondition(alpha), fam, spec=Tangent())
    assert rep.mode == "rank-reduced" and rep.verdict and not rep.undecided
    assert len(rep.candidates) == 10
    slope = check_equivariant_stability(v.fan, SlopeCondition(H + F), fam, spec=Tangent())
    assert not slope.verdict
    assert slope.reference == Fraction(14, 3)
    slopes = sorted({c.value for c in slope.candidates if c.rank == 1})
    assert slopes == [3, 5]


def test_tangent_of_projective_plane_is_slope_stable():
    v = projective_space(2)
    H = [1, 0, 0]
    rep = check_equivariant_stability(v.fan, SlopeCondition(H), tangent_filtration(v.fan), spec=Tangent())
    assert rep.verdict
    assert slope_data(v.fan, H, Tangent()) == Fraction(3, 2)


def test_split_bundle_is_only_semistable():
    # T(P1 x P1) = O(2,0) + O(0,2): the summands have the same slope as the sum for L = (1,1)
    v = p1_product(2)
    fam = tangent_filtration(v.fan)
    L = [1, 0, 1, 0]
    strict = check_equivariant_stability(v.fan, SlopeCondition(L), fam, spec=Tangent())
    loose = check_equivariant_stability(v.fan, SlopeCondition(L), fam, spec=Tangent(), strict=False)
    assert not strict.verdict and loose.verdict


def test_destabilizing_summand():
    v = projective_space(2)
    fam = direct_sum_filtration([[1, 0, 0], [0, 0, 0]])
    rep = check_equivariant_stability(v.fan, SlopeCondition([1, 0, 0]), fam)
    assert not rep.verdict
    # the O(1) line is the only step-lattice candidate, with slope 1 > 1/2
    (cand,) = rep.candidates
    assert cand.status == "fail" and cand.value == 1 and rep.reference == Fraction(1, 2)


def test_polynomial_condition_stability_raw_mode():
    v = projective_space(2)
    Z = build_dhym_charge(v.fan, [1, 0, 0])
    P = charge_to_polynomial(Z, Tangent())
    rep = check_equivariant_stability(v.fan, P, tangent_filtration(v.fan), spec=Tangent())
    assert rep.mode == "raw" and rep.reference == 0
    with pytest.raises(ValueError):
        check_equivariant_stability(v.fan, P, tangent_filtration(v.fan), mode="weird", spec=Tangent())
