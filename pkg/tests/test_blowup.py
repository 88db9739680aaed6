import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from toricpos.blowup import (
    EpsilonDeformation,
    MeaninglessBoundError,
    blowup_fixed_point,
    build_tilde_polynomial,
    epsilon_conditions,
    epsilon_grid,
    eta_bound,
    l_functional,
    verify_epsilon_equivalence,
)
from toricpos.charges import build_dhym_charge, charge_to_polynomial, evaluate_polynomial_condition
from toricpos.chow import degree, divisor
from toricpos.sheaves import LineBundle, Tangent, chern_character
from toricpos.varieties import hirzebruch, projective_space

from conftest import CORPUS_VARIETIES, random_class

MODELS = {name: blowup_fixed_point(v.fan, v.fan.max_cones[0]) for name, v in CORPUS_VARIETIES.items()}
model_names = st.sampled_from(sorted(MODELS))


def test_exceptional_self_intersection():
    for name, model in MODELS.items():
        n = model.n
        assert degree(model.D ** n) == (-1) ** (n - 1), name


def test_blowup_of_projective_plane():
    model = blowup_fixed_point(projective_space(2).fan, (0, 1))
    H = divisor(model.base_ring, [1, 0, 0])
    assert model.pushforward(model.pullback(H)) == H
    assert degree(model.pullback(H) ** 2) == 1
    assert degree(model.pullback(H) * model.D) == 0
    assert model.pushforward(model.D) == H * 0
    assert l_functional(model, model.D) == -1


@settings(max_examples=60, deadline=None)
@given(name=model_names, seed=st.integers(0, 10 ** 6))
def test_pushforward_of_pullback_is_identity(name, seed):
    model = MODELS[name]
    c = random_class(model.base, random.Random(seed))
    assert model.pushforward(model.pullback(c)) == c


@settings(max_examples=60, deadline=None)
@given(name=model_names, seed=st.integers(0, 10 ** 6))
def test_pullback_is_a_ring_map_and_projection_formula(name, seed):
    model = MODELS[name]
    rng = random.Random(seed)
    a, b = random_class(model.base, rng), random_class(model.base, rng)
    assert model.pullback(a * b) == model.pullback(a) * model.pullback(b)
    assert degree(model.pullback(a)) == degree(a)
    y = random_class(model.fan, rng)
    assert model.pushforward(model.pullback(a) * y) == a * model.pushforward(y)


@settings(max_examples=60, deadline=None)
@given(name=model_names, seed=st.integers(0, 10 ** 6), data=st.data())
def test_decomposition_identity(name, seed, data):
    model = MODELS[name]
    n = model.n
    codim = data.draw(st.integers(1, n - 1))
    c = random_class(model.fan, random.Random(seed), codim=codim)
    assert model.decomposition_residual(c) == c * 0


def test_exceptional_planes_have_l_minus_one():
    # a k-plane of D ~ P^{n-1} meets D^k in (-1)^k points
    for model in MODELS.values():
        for k in range(1, model.n):
            e = model.exceptional_class(k)
            assert model.pushforward(e) == model.pushforward(e) * 0
            assert l_functional(model, e) == -1


def _f1_setup():
    v = hirzebruch(1)
    model = blowup_fixed_point(v.fan, (0, 1))
    spec = LineBundle([1, 1, 1, 1])
    Z = build_dhym_charge(v.fan, [1, 1, 0, 0])
    return model, charge_to_polynomial(Z, spec), spec


def test_pulled_back_condition_at_zero_epsilon():
    model, P, spec = _f1_setup()
    Pt = build_tilde_polynomial(model, P, EpsilonDeformation([0, 0, 0]))
    pulled = model.pullback_spec(spec)
    assert evaluate_polynomial_condition(Pt, pulled) == 0
    # exceptional curves see only gamma_n rk at epsilon = 0
    assert evaluate_polynomial_condition(Pt, pulled, model.D) == 0


def test_normalization_line_matches_total():
    # P~_X(pi^* E) = (-1)^{n-1} rk eps_0 + eps_n deg ch_n(E) vanishes exactly on the line
    model, P, spec = _f1_setup()
    conds = epsilon_conditions(model, spec, P.delta)
    n = model.n
    rk = 1
    chn = degree(chern_character(model.base, spec).component(n))
    for e0, e1, e2 in ((1, 2, 3), (-1, 0, 5), (conds.ratio * 3, 1, 3)):
        eps = EpsilonDeformation([e0, e1, e2])
        Pt = build_tilde_polynomial(model, P, eps)
        total = evaluate_polynomial_condition(Pt, model.pullback_spec(spec))
        assert total == (-1) ** (n - 1) * rk * eps[0] + eps[n] * chn
        assert (total == 0) == conds.on_line(eps)


def test_equivalence_on_f1_grid():
    model, P, spec = _f1_setup()
    eta = eta_bound(model, P, spec)
    assert eta.eta > 0
    conds = epsilon_conditions(model, spec, P.delta)
    grid = epsilon_grid(eta.eta, conds)
    assert len(grid) == 81
    rep = verify_epsilon_equivalence(model, P, spec, eps_grid=grid)
    assert len(rep.checked) == 81 and rep.ok
    assert any(p.cond1 for p in rep.checked) and any(not p.cond1 for p in rep.checked)


@pytest.mark.parametrize("cone", [(0, 1), (1, 2), (2, 3), (0, 3)])
def test_equivalence_every_fixed_point(cone):
    v = hirzebruch(1)
    model = blowup_fixed_point(v.fan, cone)
    spec = LineBundle([1, 1, 1, 1])
    P = charge_to_polynomial(build_dhym_charge(v.fan, [1, 1, 0, 0]), spec)
    eta = eta_bound(model, P, spec)
    grid = epsilon_grid(eta.eta, epsilon_conditions(model, spec, P.delta), steps=5)
    assert verify_epsilon_equivalence(model, P, spec, eps_grid=grid).ok


def test_off_line_points_are_not_normalized():
    model, P, spec = _f1_setup()
    rep = verify_epsilon_equivalence(model, P, spec, eps_grid=[(Fraction(1, 100), 0, 0)])
    (pt,) = rep.points
    assert not pt.normalized and pt.cond1 is False and pt.cond3 is False and pt.agree


def test_bound_needs_uniform_positivity():
    v = hirzebruch(3)
    model = blowup_fixed_point(v.fan, (0, 1))
    P = charge_to_polynomial(build_dhym_charge(v.fan, [Fraction(1, 2), 1, 0, 0]), Tangent())  # below threshold
    with pytest.raises(MeaninglessBoundError):
        eta_bound(model, P, Tangent())


def test_equivalence_on_fano_threefold():
    from toricpos.varieties import p1xp1_projbundle

    fan = p1xp1_projbundle().fan
    spec = Tangent()
    P = charge_to_polynomial(build_dhym_charge(fan, [1] * 6), spec)
    model = blowup_fixed_point(fan, fan.max_cones[0])
    eta = eta_bound(model, P, spec)
    conds = epsilon_conditions(model, spec, P.delta)
    assert conds.ratio == Fraction(-2, 9)
    rep = verify_epsilon_equivalence(model, P, spec, eps_grid=epsilon_grid(eta.eta, conds, steps=3))
    assert len(rep.checked) == 27 and rep.ok
