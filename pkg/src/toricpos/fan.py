"""Smooth complete fans, their cone posets, and star subdivisions.

A fan is stored through its maximal cones only; lower-dimensional faces are
derived on demand. Cones are sorted tuples of ray indices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .linalg import determinant, dot, inverse

Cone = tuple[int, ...]


class FanError(ValueError):
    """Malformed fan input (duplicate rays, bad indices, wrong cone sizes)."""


class UnsupportedFanError(ValueError):
    """Raised when a computation needs a smooth complete fan and gets something else."""


@dataclass(frozen=True)
class Fan:
    rank: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[Cone, ...]

    def __init__(self, rays: Sequence[Sequence[int]], max_cones: Sequence[Sequence[int]]):
        rays = tuple(tuple(int(x) for x in r) for r in rays)
        if not rays:
            raise FanError("a fan needs at least one ray")
        rank = len(rays[0])
        if rank < 1:
            raise FanError("lattice rank must be positive")
        for i, r in enumerate(rays):
            if len(r) != rank:
                raise FanError(f"ray {i} has length {len(r)}, expected {rank}")
            if not any(r):
                raise FanError(f"ray {i} is zero")
        if len(set(rays)) != len(rays):
            dup = [r for r in rays if rays.count(r) > 1][0]
            raise FanError(f"duplicate ray {dup}")
        cones = []
        for j, c in enumerate(max_cones):
            c = tuple(sorted(int(i) for i in c))
            if len(c) != rank:
                raise FanError(f"max cone {j} has {len(c)} rays, expected {rank}")
            if len(set(c)) != len(c):
                raise FanError(f"max cone {j} repeats a ray")
            if any(i < 0 or i >= len(rays) for i in c):
                raise FanError(f"max cone {j} has an out-of-range ray index")
            cones.append(c)
        if len(set(cones)) != len(cones):
            raise FanError("duplicate max cone")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", tuple(sorted(cones)))

    @property
    def n(self) -> int:
        return self.rank

    @cached_property
    def _faces(self) -> dict[int, tuple[Cone, ...]]:
        out = {}
        for k in range(self.rank + 1):
            faces = {f for c in self.max_cones for f in combinations(c, k)}
            out[k] = tuple(sorted(faces))
        return out

    @cached_property
    def _face_set(self) -> frozenset[Cone]:
        return frozenset(f for fs in self._faces.values() for f in fs)

    def is_cone(self, cone: Sequence[int]) -> bool:
        return tuple(sorted(cone)) in self._face_set

    def __hash__(self):
        return hash((self.rays, self.max_cones))

    def __eq__(self, other):
        return isinstance(other, Fan) and self.rays == other.rays and self.max_cones == other.max_cones

    def __repr__(self):
        return f"Fan(rays={list(self.rays)}, max_cones={list(self.max_cones)})"


def cones_of_dim(fan: Fan, k: int) -> tuple[Cone, ...]:
    if not 0 <= k <= fan.rank:
        raise ValueError(f"cone dimension {k} outside 0..{fan.rank}")
    return fan._faces[k]


def euler_number(fan: Fan) -> int:
    return len(fan.max_cones)


@dataclass
class ValidationReport:
    smooth: bool
    complete: bool
    primitive: bool
    diagnostics: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.smooth and self.complete and self.primitive


def _cone_matrix(fan: Fan, cone: Cone) -> list[tuple[int, ...]]:
    return [fan.rays[i] for i in cone]


def _covering_degree(fan: Fan, point: Sequence[int]) -> int:
    """Number of max cones containing ``point`` in their interior (point assumed generic)."""
    count = 0
    for c in fan.max_cones:
        B = _cone_matrix(fan, c)
        if determinant(B) == 0:
            continue
        inv = inverse(B)
        # point = sum lam_i u_i  <=>  lam = point . B^{-1}
        lam = [sum(Fraction(point[r]) * inv[r][col] for r in range(fan.rank)) for col in range(fan.rank)]
        if all(x > 0 for x in lam):
            count += 1
    return count


def _generic_points(n: int) -> list[tuple[int, ...]]:
    bases = [(1, 7, 31, 101, 313), (-3, 11, -29, 97, -211), (13, -5, 17, -193, 401), (-17, -23, -41, -307, -503)]
    return [b[:n] if n <= len(b) else tuple(b[i % len(b)] + i for i in range(n)) for b in bases]


def validate_fan(fan: Fan) -> ValidationReport:
    """Check primitivity, smoothness and completeness; failures carry witnesses."""
    diag = []
    primitive = True
    for i, r in enumerate(fan.rays):
        if math.gcd(*r) != 1:
            primitive = False
            diag.append(f"ray {i} {r} is not primitive")

    smooth = True
    for c in fan.max_cones:
        d = determinant(_cone_matrix(fan, c))
        if abs(d) != 1:
            smooth = False
            diag.append(f"max cone {c} has determinant {d}")

    complete = True
    n = fan.rank
    counts: dict[Cone, int] = {}
    for c in fan.max_cones:
        for f in combinations(c, n - 1):
            counts[f] = counts.get(f, 0) + 1
    for f, cnt in sorted(counts.items()):
        if cnt != 2:
            complete = False
            diag.append(f"facet {f} lies in {cnt} max cone(s), expected 2")

    # adjacency graph through shared facets
    seen = {fan.max_cones[0]}
    stack = [fan.max_cones[0]]
    while stack:
        c = stack.pop()
        for d in fan.max_cones:
            if d not in seen and len(set(c) & set(d)) == n - 1:
                seen.add(d)
                stack.append(d)
    if len(seen) != len(fan.max_cones):
        complete = False
        diag.append(f"max-cone adjacency graph is disconnected ({len(seen)} of {len(fan.max_cones)} reachable)")

    if complete and smooth:
        for p in _generic_points(n):
            deg = _covering_degree(fan, p)
            if deg != 1:
                complete = False
                diag.append(f"point {p} is covered by {deg} max cones, expected 1")
                break
    return ValidationReport(smooth=smooth, complete=complete, primitive=primitive, diagnostics=diag)


_validated: dict[Fan, ValidationReport] = {}


def require_smooth_complete(fan: Fan) -> None:
    report = _validated.get(fan)
    if report is None:
        report = _validated.setdefault(fan, validate_fan(fan))
    if not report.ok:
        raise UnsupportedFanError("; ".join(report.diagnostics))


def star_subdivision(fan: Fan, target: Sequence[int]) -> tuple[Fan, int]:
    """Toric blow-up of the fixed point of ``target``; the new ray is appended last."""
    target = tuple(sorted(target))
    if target not in fan.max_cones:
        raise ValueError(f"{target} is not a maximal cone")
    new_ray = tuple(sum(fan.rays[i][j] for i in target) for j in range(fan.rank))
    if new_ray in fan.rays:
        raise FanError(f"subdivision ray {new_ray} already present")
    idx = len(fan.rays)
    cones = [c for c in fan.max_cones if c != target]
    for facet in combinations(target, fan.rank - 1):
        cones.append(tuple(facet) + (idx,))
    return Fan(fan.rays + (new_ray,), cones), idx


def dual_vector(fan: Fan, cone: Cone, ray: int) -> tuple[Fraction, ...]:
    """m with <m, u_ray> = 1 and <m, u> = 0 on the other rays of a max cone containing ``cone``.

    The max cone is the first one (in sorted order) containing ``cone``, which
    fixes the choice deterministically.
    """
    for c in fan.max_cones:
        if set(cone) <= set(c) and ray in c:
            inv = _inverse_of(fan, c)
            j = c.index(ray)
            return tuple(inv[r][j] for r in range(fan.rank))
    raise ValueError(f"ray {ray} and cone {cone} are not in a common max cone")


_inverse_cache: dict[tuple[Fan, Cone], list] = {}


def _inverse_of(fan: Fan, cone: Cone):
    key = (fan, cone)
    if key not in _inverse_cache:
        # rows of B are rays; B^{-1} column j pairs to delta_{ij} with ray i
        _inverse_cache[key] = inverse(_cone_matrix(fan, cone))
    return _inverse_cache[key]


def support_function_data(fan: Fan, coeffs: Sequence) -> dict[Cone, tuple[Fraction, ...]]:
    """Per max cone the m_sigma with <m_sigma, u_rho> = -a_rho for rho in sigma."""
    out = {}
    for c in fan.max_cones:
        inv = _inverse_of(fan, c)
        rhs = [-Fraction(coeffs[i]) for i in c]
        out[c] = tuple(sum(inv[r][j] * rhs[j] for j in range(fan.rank)) for r in range(fan.rank))
    return out


def is_ample(fan: Fan, coeffs: Sequence) -> bool:
    """Strict convexity of the support function of sum a_rho D_rho (smooth complete fan)."""
    require_smooth_complete(fan)
    data = support_function_data(fan, coeffs)
    for c, m in data.items():
        for i, u in enumerate(fan.rays):
            if i not in c and not dot(m, u) > -Fraction(coeffs[i]):
                return False
    return True


def is_nef(fan: Fan, coeffs: Sequence) -> bool:
    require_smooth_complete(fan)
    data = support_function_data(fan, coeffs)
    return all(dot(m, u) >= -Fraction(coeffs[i]) for c, m in data.items() for i, u in enumerate(fan.rays) if i not in c)


def find_ample_divisor(fan: Fan, bound: int = 4) -> tuple[int, ...]:
    """Smallest-height integer ample divisor, found by an LP guess and exact certification.

    Falls back to exhaustive search over coefficients in [0, bound].
    """
    require_smooth_complete(fan)
    guess = _lp_ample_guess(fan)
    if guess is not None:
        for scale in (1, 2, 3, 6, 12):
            cand = tuple(round(x * scale) for x in guess)
            if is_ample(fan, cand):
                return cand
    from itertools import product

    for height in range(1, bound + 1):
        for cand in product(range(height + 1), repeat=len(fan.rays)):
            if max(cand) == height and is_ample(fan, cand):
                return cand
    raise UnsupportedFanError("no ample divisor found; fan may not be projective")


def _lp_ample_guess(fan: Fan):
    import numpy as np
    from scipy.optimize import linprog

    # variables a_rho; constraints <m_sigma(a), u_rho> + a_rho >= 1 for rho not in sigma
    nr = len(fan.rays)
    A_ub, b_ub = [], []
    for c in fan.max_cones:
        inv = _inverse_of(fan, c)
        for i, u in enumerate(fan.rays):
            if i in c:
                continue
            row = [0.0] * nr
            # <m, u> = sum_r u_r sum_j inv[r][j] (-a_{c_j})
            for j, ray in enumerate(c):
                row[ray] -= float(sum(u[r] * inv[r][j] for r in range(fan.rank)))
            row[i] += 1.0
            A_ub.append([-x for x in row])
            b_ub.append(-1.0)
    if not A_ub:
        return None
    res = linprog(np.ones(nr), A_ub=np.array(A_ub), b_ub=np.array(b_ub), bounds=[(0, 50)] * nr, method="highs")
    if not res.success:
        return None
    return [float(x) for x in res.x]
