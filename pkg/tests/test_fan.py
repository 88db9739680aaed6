from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from toricpos.fan import (
    Fan,
    FanError,
    UnsupportedFanError,
    cones_of_dim,
    euler_number,
    find_ample_divisor,
    is_ample,
    is_nef,
    require_smooth_complete,
    star_subdivision,
    validate_fan,
)
from toricpos.varieties import custom_variety, hirzebruch, projective_space


def test_corpus_fans_are_smooth_and_complete(variety):
    rep = validate_fan(variety.fan)
    assert rep.ok, rep.diagnostics


def test_cone_counts(variety):
    fan = variety.fan
    assert len(cones_of_dim(fan, 0)) == 1
    assert len(cones_of_dim(fan, 1)) == len(fan.rays)
    assert len(cones_of_dim(fan, fan.rank)) == len(fan.max_cones)


def test_euler_numbers():
    assert euler_number(hirzebruch(2).fan) == 4
    assert euler_number(projective_space(3).fan) == 4


def test_incomplete_fan_is_rejected():
    fan = Fan([(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2)])
    rep = validate_fan(fan)
    assert rep.smooth and not rep.complete
    with pytest.raises(UnsupportedFanError):
        require_smooth_complete(fan)


def test_singular_fan_is_rejected():
    # weighted projective plane P(1,1,2)
    fan = Fan([(1, 0), (0, 1), (-1, -2)], [(0, 1), (1, 2), (0, 2)])
    rep = validate_fan(fan)
    assert not rep.smooth
    assert not rep.ok


def test_non_primitive_ray_is_flagged():
    fan = Fan([(2, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])
    assert not validate_fan(fan).ok


def test_overlapping_cones_are_not_complete():
    # two copies of the same chamber structure: covering degree 2 somewhere
    rays = [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1)]
    fan = Fan(rays, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)])
    assert not validate_fan(fan).ok


def test_bad_cone_index():
    with pytest.raises((FanError, ValueError, IndexError)):
        Fan([(1, 0), (0, 1)], [(0, 5)])


def _gl2_matches(fan_a: Fan, fan_b: Fan) -> bool:
    """Brute-force a unimodular map carrying the rays and cones of fan_a onto fan_b."""
    rays_b = {r: i for i, r in enumerate(fan_b.rays)}
    cones_b = {frozenset(c) for c in fan_b.max_cones}
    for a, b, c, d in product(range(-3, 4), repeat=4):
        if abs(a * d - b * c) != 1:
            continue
        image = [(a * x + b * y, c * x + d * y) for x, y in fan_a.rays]
        if not all(v in rays_b for v in image):
            continue
        perm = [rays_b[v] for v in image]
        if {frozenset(perm[i] for i in cone) for cone in fan_a.max_cones} == cones_b:
            return True
    return False


def test_blowup_of_p2_is_f1():
    blown, new = star_subdivision(projective_space(2).fan, (0, 1))
    assert new == 3 and blown.rays[new] == (1, 1)
    assert validate_fan(blown).ok
    assert _gl2_matches(blown, hirzebruch(1).fan)
    assert not _gl2_matches(projective_space(2).fan, hirzebruch(1).fan)
    assert not _gl2_matches(blown, hirzebruch(0).fan)


def test_star_subdivision_requires_max_cone():
    with pytest.raises(ValueError):
        star_subdivision(projective_space(2).fan, (0,))


def test_star_subdivision_counts(variety):
    fan = variety.fan
    blown, _ = star_subdivision(fan, fan.max_cones[0])
    assert validate_fan(blown).ok
    assert len(blown.max_cones) == len(fan.max_cones) - 1 + fan.rank
    assert euler_number(blown) == euler_number(fan) + fan.rank - 1


@settings(max_examples=60, deadline=None)
@given(r=st.integers(0, 5), a=st.integers(-3, 3), b=st.integers(-3, 3))
def test_hirzebruch_ample_and_nef_cones(r, a, b):
    # aF + bH is ample iff a, b > 0 and nef iff a, b >= 0
    v = hirzebruch(r)
    coeffs = [b, a, 0, 0]
    assert is_ample(v.fan, coeffs) == (a > 0 and b > 0)
    assert is_nef(v.fan, coeffs) == (a >= 0 and b >= 0)


def test_found_divisor_is_ample(variety):
    A = find_ample_divisor(variety.fan)
    assert is_ample(variety.fan, A)


def test_custom_variety_labels():
    with pytest.raises(ValueError):
        custom_variety([(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)], labels=["a", "a", "b"])
