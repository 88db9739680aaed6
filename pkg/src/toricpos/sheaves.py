"""Equivariant reflexive sheaves as families of filtrations, and their Chern characters.

A family assigns to each ray alpha a bounded increasing filtration
E^alpha(i) of a fixed rational vector space (a subspace ``space`` of Q^r,
so that induced families on subspaces keep the ambient coordinates).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Sequence, Union

from .chow import ChowElement, chow_ring, divisor, exp, one, prime_divisor
from .fan import Fan, require_smooth_complete
from .linalg import Subspace

ENUMERATION_CAP = 4096


class UnsupportedSheafError(ValueError):
    """The Chern character of this sheaf is not computable from the given data."""


class EnumerationLimitError(RuntimeError):
    pass


Step = tuple[int, Subspace]


@dataclass(frozen=True)
class FiltrationFamily:
    """Per ray, the list of jumps (i, E^alpha(i)); E^alpha(i) = 0 below the first jump."""

    space: Subspace
    steps: tuple[tuple[Step, ...], ...]

    def __post_init__(self):
        for a, ray_steps in enumerate(self.steps):
            if not ray_steps:
                raise ValueError(f"ray {a}: empty filtration")
            for (i0, s0), (i1, s1) in zip(ray_steps, ray_steps[1:]):
                if not i0 < i1:
                    raise ValueError(f"ray {a}: step indices must strictly increase")
                if not s0 < s1:
                    raise ValueError(f"ray {a}: step subspaces must strictly increase")
            for _, s in ray_steps:
                if s.dim == 0 or not s <= self.space:
                    raise ValueError(f"ray {a}: steps must be nonzero subspaces of the base space")
            if ray_steps[-1][1] != self.space:
                raise ValueError(f"ray {a}: last step must be the whole space")

    @classmethod
    def build(cls, space: Subspace, raw_steps: Sequence[Sequence[tuple[int, Subspace]]]) -> "FiltrationFamily":
        """Normalize arbitrary (i, subspace) lists: sort, drop zeros and non-jumps, close with the space."""
        out = []
        for ray_steps in raw_steps:
            norm: list[Step] = []
            for i, s in sorted(ray_steps, key=lambda t: t[0]):
                s = s & space if s.ambient == space.ambient else s
                if s.dim == 0:
                    continue
                if norm and norm[-1][1] == s:
                    continue
                if norm and not norm[-1][1] <= s:
                    raise ValueError("filtration steps are not increasing")
                norm.append((int(i), s))
            if not norm or norm[-1][1] != space:
                raise ValueError("filtration never reaches the whole space")
            out.append(tuple(norm))
        return cls(space, tuple(out))

    @property
    def rank(self) -> int:
        return self.space.dim

    @property
    def ambient(self) -> int:
        return self.space.ambient

    def at(self, ray: int, i: int) -> Subspace:
        current = Subspace.zero(self.ambient)
        for j, s in self.steps[ray]:
            if j <= i:
                current = s
        return current

    def jump_index(self, ray: int, vectors: Sequence | Subspace) -> int:
        """min{ i : span(vectors) <= E^ray(i) }."""
        sub = vectors if isinstance(vectors, Subspace) else Subspace.span(vectors, self.ambient)
        for j, s in self.steps[ray]:
            if sub <= s:
                return j
        raise ValueError("subspace is not contained in the base space")

    def distinct_steps(self, proper: bool = True) -> list[Subspace]:
        seen: list[Subspace] = []
        for ray_steps in self.steps:
            for _, s in ray_steps:
                if proper and s == self.space:
                    continue
                if s not in seen:
                    seen.append(s)
        return sorted(seen, key=_subspace_key)

    def induced(self, sub: Subspace) -> "FiltrationFamily":
        """The family (F, F ∩ E^alpha(i)) of the saturated subsheaf attached to F."""
        if not sub <= self.space:
            raise ValueError("subspace must lie in the base space")
        return FiltrationFamily.build(sub, [[(i, s & sub) for i, s in ray_steps] for ray_steps in self.steps])

    def describe(self) -> dict:
        return {
            "rank": self.rank,
            "space": [[str(x) for x in b] for b in self.space.basis],
            "steps": [[[i, [[str(x) for x in b] for b in s.basis]] for i, s in rs] for rs in self.steps],
        }


def _subspace_key(s: Subspace):
    return (s.dim, s.basis)


# ---- sheaf specifications ---------------------------------------------------


@dataclass(frozen=True)
class LineBundle:
    coefficients: tuple[Fraction, ...]

    def __init__(self, coefficients: Sequence):
        object.__setattr__(self, "coefficients", tuple(Fraction(c) for c in coefficients))


@dataclass(frozen=True)
class Tangent:
    pass


@dataclass(frozen=True)
class DirectSum:
    parts: tuple

    def __init__(self, parts: Sequence):
        if not parts:
            raise ValueError("empty direct sum")
        object.__setattr__(self, "parts", tuple(parts))


@dataclass(frozen=True)
class Filtration:
    family: FiltrationFamily


@dataclass(eq=False)
class RawChern:
    rank: int
    ch: ChowElement

    def __post_init__(self):
        if self.ch.scalar() != self.rank:
            raise ValueError(f"degree-0 part {self.ch.scalar()} differs from rank {self.rank}")


SheafSpec = Union[LineBundle, Tangent, DirectSum, Filtration, RawChern]


def sheaf_rank(fan: Fan, spec: SheafSpec) -> int:
    if isinstance(spec, LineBundle):
        return 1
    if isinstance(spec, Tangent):
        return fan.rank
    if isinstance(spec, DirectSum):
        return sum(sheaf_rank(fan, p) for p in spec.parts)
    if isinstance(spec, Filtration):
        return spec.family.rank
    if isinstance(spec, RawChern):
        return spec.rank
    raise TypeError(f"unknown sheaf spec {spec!r}")


@lru_cache(maxsize=None)
def tangent_chern_character(fan: Fan) -> ChowElement:
    """ch(T) = n + sum_{k>=1} (1/k!) sum_rho D_rho^k."""
    ring = chow_ring(fan)
    out = one(ring) * fan.rank
    for rho in range(len(fan.rays)):
        D = prime_divisor(ring, rho)
        power = one(ring)
        for k in range(1, fan.rank + 1):
            power = power * D
            out = out + power * Fraction(1, factorial(k))
    return out


def chern_character(fan: Fan, spec: SheafSpec) -> ChowElement:
    require_smooth_complete(fan)
    ring = chow_ring(fan)
    if isinstance(spec, LineBundle):
        return exp(divisor(ring, spec.coefficients))
    if isinstance(spec, Tangent):
        return tangent_chern_character(fan)
    if isinstance(spec, DirectSum):
        total = ChowElement.zero(ring)
        for p in spec.parts:
            total = total + chern_character(fan, p)
        return total
    if isinstance(spec, RawChern):
        if spec.ch.fan != fan:
            raise ValueError("raw Chern data lives on a different fan")
        return spec.ch
    if isinstance(spec, Filtration):
        if len(spec.family.steps) != len(fan.rays):
            raise ValueError("filtration family has the wrong number of rays")
        split = split_decomposition(spec.family)
        if split is None:
            raise UnsupportedSheafError("filtration family is not a direct sum of line bundles")
        return chern_character(fan, DirectSum([lb for _, lb in split]))
    raise TypeError(f"unknown sheaf spec {spec!r}")


def tangent_filtration(fan: Fan) -> FiltrationFamily:
    n = fan.rank
    full = Subspace.full(n)
    raw = [[(-1, Subspace.span([u], n)), (0, full)] for u in fan.rays]
    return FiltrationFamily.build(full, raw)


def line_bundle_filtration(coeffs: Sequence[int]) -> FiltrationFamily:
    """O(sum a_rho D_rho) as a rank-1 family: E^rho(i) = Q for i >= -a_rho."""
    full = Subspace.full(1)
    return FiltrationFamily.build(full, [[(-int(a), full)] for a in coeffs])


def direct_sum_filtration(line_bundles: Sequence[Sequence[int]]) -> FiltrationFamily:
    """The split family of O(a^1) + ... + O(a^r) along the coordinate basis."""
    r = len(line_bundles)
    if r == 0:
        raise ValueError("need at least one line bundle")
    nrays = len(line_bundles[0])
    full = Subspace.full(r)
    basis = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    raw = []
    for rho in range(nrays):
        jumps = sorted({-int(lb[rho]) for lb in line_bundles})
        raw.append([(i, Subspace.span([basis[j] for j, lb in enumerate(line_bundles) if i >= -int(lb[rho])], r))
                    for i in jumps])
    return FiltrationFamily.build(full, raw)


def _meet_closure(gens: Sequence[Subspace], cap: int = ENUMERATION_CAP) -> list[Subspace]:
    closed = list(dict.fromkeys(gens))
    frontier = list(closed)
    while frontier:
        new = []
        for a in frontier:
            for b in closed:
                m = a & b
                if m.dim and m not in closed and m not in new:
                    new.append(m)
        closed.extend(new)
        if len(closed) > cap:
            raise EnumerationLimitError(f"subspace closure exceeds {cap} members")
        frontier = new
    return sorted(closed, key=_subspace_key)


def split_decomposition(family: FiltrationFamily) -> list[tuple[tuple[Fraction, ...], LineBundle]] | None:
    """Decompose into rank-1 families along a common basis, or return None.

    Each member x of the meet-closure of the steps contributes a complement of
    the sum of the members strictly below it. The family splits iff these
    vectors number exactly the rank; then every step is spanned by the basis
    vectors it contains, and each basis line is the line bundle with
    a_alpha = -min{ i : line <= E^alpha(i) }.
    """
    members = _meet_closure(family.distinct_steps(proper=False))
    basis: list[tuple[Fraction, ...]] = []
    for x in members:
        below = [y for y in members if y < x]
        lower = Subspace.zero(family.ambient)
        for y in below:
            lower = lower + y
        basis.extend(lower.complement_in(x))
        if len(basis) > family.rank:
            return None
    if len(basis) != family.rank:
        return None
    out = []
    for v in basis:
        coeffs = [-family.jump_index(a, [v]) for a in range(len(family.steps))]
        out.append((v, LineBundle(coeffs)))
    return out


def enumerate_equivariant_subsheaves(family: FiltrationFamily, cap: int = ENUMERATION_CAP):
    """Candidate saturated equivariant subsheaves (F, F ∩ E^alpha(i)).

    Candidates F are the sums of subsets of the meet-closure of the proper
    filtration steps, excluding 0 and the whole space.
    """
    if family.rank <= 1:
        return []
    meets = _meet_closure(family.distinct_steps(proper=True), cap)
    found: list[Subspace] = list(meets)
    frontier = list(meets)
    while frontier:
        new = []
        for a in frontier:
            for b in meets:
                s = a + b
                if s not in found and s not in new:
                    new.append(s)
        found.extend(new)
        if len(found) > cap:
            raise EnumerationLimitError(f"candidate subspaces exceed {cap}")
        frontier = new
    candidates = sorted((s for s in found if 0 < s.dim < family.rank and s != family.space), key=_subspace_key)
    return [(s, family.induced(s)) for s in candidates]


def sheaf_total(fan: Fan, P, spec: SheafSpec) -> Fraction:
    """P_X of a sheaf."""
    from .charges import evaluate_polynomial_condition

    return evaluate_polynomial_condition(P, spec, one(chow_ring(fan)), fan=fan)
