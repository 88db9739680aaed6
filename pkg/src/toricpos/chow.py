"""Exact Chow rings of smooth complete toric varieties.

Classes are rational combinations of orbit-closure classes [V(sigma)]; the
codimension-k piece is indexed by the k-dimensional cones of the fan. Equality
is decided modulo the linear relations coming from characters vanishing on a
face (the Fulton–Sturmfels relations), never coordinate-wise.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Mapping, Sequence

from .fan import Cone, Fan, cones_of_dim, dual_vector, require_smooth_complete
from .linalg import RowSpace, dot, nullspace


class FanMismatchError(ValueError):
    pass


class ChowRing:
    """Combinatorial data of A^*(X_fan): cone indexing, relation spaces, product tables."""

    def __init__(self, fan: Fan):
        require_smooth_complete(fan)
        self.fan = fan
        self.n = fan.rank
        self.cones: tuple[tuple[Cone, ...], ...] = tuple(cones_of_dim(fan, k) for k in range(self.n + 1))
        self.index: tuple[dict[Cone, int], ...] = tuple({c: i for i, c in enumerate(cs)} for cs in self.cones)
        self._relations: dict[int, RowSpace] = {}
        self._div_table: dict[tuple[int, Cone], dict[Cone, Fraction]] = {}
        self._structure: dict[tuple[int, int, int, int], tuple[Fraction, ...]] = {}
        self._pairing: dict[int, tuple[tuple[Fraction, ...], ...]] = {}
        self._cone_coords: dict[Cone, tuple[Fraction, ...]] = {}
        self._lock = threading.Lock()

    # ---- relations -------------------------------------------------------
    def relation_vectors(self, k: int) -> list[tuple[Fraction, ...]]:
        """Fulton–Sturmfels relations in codimension k (k >= 1)."""
        if k == 0:
            return []
        fan, out = self.fan, []
        for tau in self.cones[k - 1]:
            perp = nullspace([fan.rays[i] for i in tau], self.n) if tau else nullspace([], self.n)
            supersets = [s for s in self.cones[k] if set(tau) <= set(s)]
            for m in perp:
                vec = [Fraction(0)] * len(self.cones[k])
                for s in supersets:
                    (extra,) = set(s) - set(tau)
                    vec[self.index[k][s]] = dot(m, fan.rays[extra])
                if any(vec):
                    out.append(tuple(vec))
        return out

    def relations(self, k: int) -> RowSpace:
        rs = self._relations.get(k)
        if rs is None:
            rs = RowSpace(self.relation_vectors(k), len(self.cones[k]))
            with self._lock:
                self._relations.setdefault(k, rs)
        return rs

    def basis_cones(self, k: int) -> tuple[Cone, ...]:
        """Cones whose classes form the fixed pivot basis of A^k (the free columns)."""
        return tuple(self.cones[k][j] for j in self.relations(k).free)

    def rank_of(self, k: int) -> int:
        return len(self.relations(k).free)

    # ---- divisor action on cone classes ----------------------------------
    def divisor_times_cone(self, ray: int, sigma: Cone) -> dict[Cone, Fraction]:
        key = (ray, sigma)
        cached = self._div_table.get(key)
        if cached is not None:
            return cached
        fan = self.fan
        out: dict[Cone, Fraction] = {}
        if ray not in sigma:
            tau = tuple(sorted(sigma + (ray,)))
            if fan.is_cone(tau):
                out[tau] = Fraction(1)
        else:
            # D_ray ~ -sum_{rho'' not in the chosen max cone} <m, u_rho''> D_rho''
            m = dual_vector(fan, sigma, ray)
            for j, u in enumerate(fan.rays):
                if j == ray:
                    continue
                c = dot(m, u)
                if c == 0:
                    continue
                # rho'' here is never in sigma: m vanishes on sigma's other rays
                tau = tuple(sorted(sigma + (j,)))
                if fan.is_cone(tau):
                    out[tau] = out.get(tau, Fraction(0)) - c
        out = {c: v for c, v in out.items() if v}
        with self._lock:
            self._div_table.setdefault(key, out)
        return out


    # ---- structure constants on the pivot basis ------------------------------
    def basis_product(self, k: int, i: int, l: int, j: int) -> tuple[Fraction, ...]:
        """Pivot-basis coordinates of b^k_i * b^l_j in codimension k + l (k + l <= n)."""
        key = (k, i, l, j) if k <= l else (l, j, k, i)
        cached = self._structure.get(key)
        if cached is not None:
            return cached
        sigma = self.basis_cones(k)[i]
        tau = self.basis_cones(l)[j]
        acc = cone_class(self, tau)
        for ray in sigma:
            acc = multiply_by_divisor(self.fan, ray, acc)
        out = acc.reduced(k + l)
        with self._lock:
            self._structure.setdefault(key, out)
        return out


    def pairing_matrix(self, k: int) -> tuple[tuple[Fraction, ...], ...]:
        """G[i][j] = deg(b^k_i * b^{n-k}_j) on the pivot bases (top codimension has rank 1)."""
        G = self._pairing.get(k)
        if G is None:
            G = tuple(
                tuple(self.basis_product(k, i, self.n - k, j)[0] for j in range(self.rank_of(self.n - k)))
                for i in range(self.rank_of(k))
            )
            with self._lock:
                self._pairing.setdefault(k, G)
        return G

    def cone_coordinates(self, cone: Cone) -> tuple[Fraction, ...]:
        """Pivot-basis coordinates of [V(cone)]."""
        cached = self._cone_coords.get(cone)
        if cached is None:
            cached = cone_class(self, cone).reduced(len(cone))
            with self._lock:
                self._cone_coords.setdefault(cone, cached)
        return cached


_rings: dict[Fan, ChowRing] = {}
_rings_lock = threading.Lock()


def chow_ring(fan: Fan) -> ChowRing:
    ring = _rings.get(fan)
    if ring is None:
        ring = ChowRing(fan)
        with _rings_lock:
            ring = _rings.setdefault(fan, ring)
    return ring


class ChowElement:
    """A graded class sum_k sum_{dim sigma = k} c_sigma [V(sigma)] (k = codimension)."""

    __slots__ = ("ring", "parts", "_reduced")
    __hash__ = None  # equality is modulo relations, so no stable hash exists

    def __init__(self, ring: ChowRing, parts: Sequence[Sequence]):
        if len(parts) != ring.n + 1:
            raise ValueError(f"expected {ring.n + 1} graded parts, got {len(parts)}")
        clean = []
        for k, p in enumerate(parts):
            if len(p) != len(ring.cones[k]):
                raise ValueError(f"codim {k} part has length {len(p)}, expected {len(ring.cones[k])}")
            clean.append(tuple(x if type(x) is Fraction else Fraction(x) for x in p))
        self.ring = ring
        self.parts = tuple(clean)
        self._reduced: dict[int, tuple[Fraction, ...]] = {}

    # ---- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, fan_or_ring) -> "ChowElement":
        ring = _as_ring(fan_or_ring)
        return cls(ring, [[0] * len(cs) for cs in ring.cones])

    @classmethod
    def from_terms(cls, fan_or_ring, terms: Mapping[Sequence[int], object] | Iterable) -> "ChowElement":
        ring = _as_ring(fan_or_ring)
        parts = [[Fraction(0)] * len(cs) for cs in ring.cones]
        items = terms.items() if isinstance(terms, Mapping) else terms
        for cone, coef in items:
            cone = tuple(sorted(cone))
            k = len(cone)
            if cone not in ring.index[k]:
                raise ValueError(f"{cone} is not a cone of the fan")
            parts[k][ring.index[k][cone]] += Fraction(coef)
        return cls(ring, parts)

    @property
    def fan(self) -> Fan:
        return self.ring.fan

    @property
    def n(self) -> int:
        return self.ring.n

    # ---- arithmetic ------------------------------------------------------
    def _check(self, other: "ChowElement"):
        if not isinstance(other, ChowElement):
            return NotImplemented
        if other.ring is not self.ring and other.ring.fan != self.ring.fan:
            raise FanMismatchError("classes live on different fans")
        return None

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = one(self.ring) * other
        if self._check(other) is NotImplemented:
            return NotImplemented
        return ChowElement(self.ring, [tuple(a + b for a, b in zip(p, q)) for p, q in zip(self.parts, other.parts)])

    __radd__ = __add__

    def __neg__(self):
        return ChowElement(self.ring, [tuple(-a for a in p) for p in self.parts])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return ChowElement(self.ring, [tuple(c * a for a in p) for p in self.parts])
        if isinstance(other, ChowElement):
            return product(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = one(self.ring)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = one(self.ring) * other
        if not isinstance(other, ChowElement):
            return NotImplemented
        self._check(other)
        return canonical_zero_test(self - other)

    # ---- graded access ---------------------------------------------------
    def component(self, k: int) -> "ChowElement":
        parts = [p if j == k else (Fraction(0),) * len(p) for j, p in enumerate(self.parts)]
        return ChowElement(self.ring, parts)

    def truncate_above(self, k: int) -> "ChowElement":
        parts = [p if j <= k else (Fraction(0),) * len(p) for j, p in enumerate(self.parts)]
        return ChowElement(self.ring, parts)

    def codims(self) -> list[int]:
        return [k for k, p in enumerate(self.parts) if any(p)]

    def pure_codim(self) -> int | None:
        """The codimension of a nonzero pure class (coordinate support), else None."""
        ks = self.codims()
        return ks[0] if len(ks) == 1 else None

    def scalar(self) -> Fraction:
        """The coefficient of [X]."""
        return self.parts[0][0]

    def terms(self) -> list[tuple[Cone, Fraction]]:
        return [(c, v) for k, p in enumerate(self.parts) for c, v in zip(self.ring.cones[k], p) if v]

    def reduced(self, k: int) -> tuple[Fraction, ...]:
        """Coordinates of the codim-k part in the pivot basis (relation-reduced)."""
        cached = self._reduced.get(k)
        if cached is None:
            rs = self.ring.relations(k)
            red = rs.reduce(self.parts[k])
            cached = self._reduced[k] = tuple(red[j] for j in rs.free)
        return cached

    def norm(self, k: int | None = None) -> Fraction:
        """L1 norm of relation-reduced coordinates (all codims, or just ``k``)."""
        ks = range(self.n + 1) if k is None else [k]
        return sum((abs(x) for j in ks for x in self.reduced(j)), Fraction(0))

    def normal_form(self) -> "ChowElement":
        """Same class, supported on the pivot basis cones."""
        parts = []
        for k in range(self.n + 1):
            red = self.ring.relations(k).reduce(self.parts[k])
            parts.append(red)
        return ChowElement(self.ring, parts)

    def serialize(self) -> list[list[list]]:
        """Per codimension, a list of [cone, "p/q"] pairs (raw coordinates)."""
        return [[[list(c), str(v)] for c, v in zip(self.ring.cones[k], p) if v] for k, p in enumerate(self.parts)]

    def __repr__(self):
        if not self.terms():
            return "0"
        bits = []
        for c, v in self.terms():
            name = "X" if not c else "V(" + ",".join(map(str, c)) + ")"
            bits.append(f"{v}*{name}")
        return " + ".join(bits)


def _as_ring(x) -> ChowRing:
    return x if isinstance(x, ChowRing) else chow_ring(x)


def one(fan_or_ring) -> ChowElement:
    return ChowElement.from_terms(fan_or_ring, {(): 1})


def cone_class(fan_or_ring, cone: Sequence[int]) -> ChowElement:
    return ChowElement.from_terms(fan_or_ring, {tuple(cone): 1})


def divisor(fan_or_ring, coeffs: Sequence) -> ChowElement:
    """sum_rho a_rho D_rho."""
    ring = _as_ring(fan_or_ring)
    if len(coeffs) != len(ring.fan.rays):
        raise ValueError(f"need {len(ring.fan.rays)} divisor coefficients, got {len(coeffs)}")
    return ChowElement.from_terms(ring, [((i,), a) for i, a in enumerate(coeffs)])


def prime_divisor(fan_or_ring, ray: int) -> ChowElement:
    return cone_class(fan_or_ring, (ray,))


def point_class(fan_or_ring) -> ChowElement:
    ring = _as_ring(fan_or_ring)
    return cone_class(ring, ring.cones[ring.n][0])


def canonical_divisor(fan_or_ring) -> ChowElement:
    ring = _as_ring(fan_or_ring)
    return divisor(ring, [-1] * len(ring.fan.rays))


def multiply_by_divisor(fan: Fan, ray_index: int, cls: ChowElement) -> ChowElement:
    ring = cls.ring
    if fan != ring.fan:
        raise FanMismatchError("class does not live on this fan")
    if not 0 <= ray_index < len(fan.rays):
        raise ValueError(f"ray index {ray_index} out of range")
    n = ring.n
    parts = [[Fraction(0)] * len(cs) for cs in ring.cones]
    for k in range(n):
        for sigma, coef in zip(ring.cones[k], cls.parts[k]):
            if not coef:
                continue
            for tau, v in ring.divisor_times_cone(ray_index, sigma).items():
                parts[k + 1][ring.index[k + 1][tau]] += coef * v
    return ChowElement(ring, parts)


def product(a: ChowElement, b: ChowElement) -> ChowElement:
    """Graded product, truncated above codimension n, returned in normal form.

    Both factors are reduced to the pivot basis and multiplied with cached
    structure constants; a constant is computed once by expanding
    [V(sigma)] = prod_{rho in sigma} D_rho against a basis cone.
    """
    if a.ring is not b.ring and a.fan != b.fan:
        raise FanMismatchError("classes live on different fans")
    ring = a.ring
    n = ring.n
    ra = [a.reduced(k) if any(a.parts[k]) else None for k in range(n + 1)]
    rb = [b.reduced(k) if any(b.parts[k]) else None for k in range(n + 1)]
    acc = [[Fraction(0)] * ring.rank_of(k) for k in range(n + 1)]
    for k, va in enumerate(ra):
        if va is None:
            continue
        for l, vb in enumerate(rb):
            if vb is None or k + l > n:
                continue
            target = acc[k + l]
            for i, x in enumerate(va):
                if not x:
                    continue
                for j, y in enumerate(vb):
                    if not y:
                        continue
                    c = x * y
                    for t, s in enumerate(ring.basis_product(k, i, l, j)):
                        if s:
                            target[t] += c * s
    parts = []
    for k in range(n + 1):
        p = [Fraction(0)] * len(ring.cones[k])
        for t, col in enumerate(ring.relations(k).free):
            p[col] = acc[k][t]
        parts.append(p)
    return ChowElement(ring, parts)


def naive_product(a: ChowElement, b: ChowElement) -> ChowElement:
    """Product by direct expansion into divisor multiplications (reference implementation)."""
    if a.ring is not b.ring and a.fan != b.fan:
        raise FanMismatchError("classes live on different fans")
    ring = a.ring
    out = ChowElement.zero(ring)
    for sigma, coef in b.terms():
        acc = a.truncate_above(ring.n - len(sigma))
        for ray in sigma:
            acc = multiply_by_divisor(ring.fan, ray, acc)
        out = out + acc * coef
    return out


def intersection_number(a: ChowElement, b: ChowElement) -> Fraction:
    """deg(a * b) through the Poincare pairing, without forming the product."""
    if a.ring is not b.ring and a.fan != b.fan:
        raise FanMismatchError("classes live on different fans")
    ring, n = a.ring, a.n
    total = Fraction(0)
    for k in range(n + 1):
        if not any(a.parts[k]) or not any(b.parts[n - k]):
            continue
        total += pair_reduced(ring, k, a.reduced(k), b.reduced(n - k))
    return total


def pair_reduced(ring: ChowRing, k: int, x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
    """x^T G_k y for pivot coordinates x in codim k and y in codim n - k."""
    G = ring.pairing_matrix(k)
    total = Fraction(0)
    for xi, row in zip(x, G):
        if xi:
            total += xi * sum((g * yj for g, yj in zip(row, y) if g and yj), Fraction(0))
    return total


def degree(cls: ChowElement) -> Fraction:
    return sum(cls.parts[cls.n], Fraction(0))


def canonical_zero_test(cls: ChowElement) -> bool:
    ring = cls.ring
    for k, p in enumerate(cls.parts):
        if not any(p):
            continue
        if k == 0:
            return False
        if not ring.relations(k).contains(p):
            return False
    return True


def power_series(D: ChowElement, coeffs: Sequence[Fraction]) -> ChowElement:
    """sum_k coeffs[k] D^k for a codimension-1 (nilpotent) class, truncated at codim n."""
    out = ChowElement.zero(D.ring)
    power = one(D.ring)
    for k in range(D.n + 1):
        if k < len(coeffs) and coeffs[k]:
            out = out + power * Fraction(coeffs[k])
        power = power * D
    return out


def exp(D: ChowElement) -> ChowElement:
    return power_series(D, [Fraction(1, factorial(k)) for k in range(D.n + 1)])


def _todd_series(n: int) -> list[Fraction]:
    # x / (1 - e^{-x}) is the inverse of (1 - e^{-x}) / x = sum_k (-1)^k x^k / (k+1)!
    a = [Fraction((-1) ** k, factorial(k + 1)) for k in range(n + 1)]
    b = [Fraction(0)] * (n + 1)
    b[0] = 1 / a[0]
    for k in range(1, n + 1):
        b[k] = -sum((a[j] * b[k - j] for j in range(1, k + 1)), Fraction(0)) / a[0]
    return b


@lru_cache(maxsize=None)
def todd_class(fan: Fan) -> ChowElement:
    ring = chow_ring(fan)
    series = _todd_series(ring.n)
    out = one(ring)
    for i in range(len(fan.rays)):
        out = out * power_series(prime_divisor(ring, i), series)
    return out


@lru_cache(maxsize=None)
def total_chern_of_tangent(fan: Fan) -> ChowElement:
    ring = chow_ring(fan)
    out = one(ring)
    for i in range(len(fan.rays)):
        out = out * (one(ring) + prime_divisor(ring, i))
    return out


def effective_generators(fan: Fan, k: int) -> list[ChowElement]:
    """Orbit-closure classes of dimension k: one per cone of dimension n - k."""
    n = fan.rank
    if not 0 <= k <= n:
        raise ValueError(f"cycle dimension {k} outside 0..{n}")
    ring = chow_ring(fan)
    return [cone_class(ring, c) for c in ring.cones[n - k]]


@dataclass(frozen=True)
class GaussianChowElement:
    """A complex class real + i*imag."""

    real: ChowElement
    imag: ChowElement

    def __post_init__(self):
        if self.real.fan != self.imag.fan:
            raise FanMismatchError("real and imaginary parts on different fans")

    def __add__(self, other: "GaussianChowElement") -> "GaussianChowElement":
        return GaussianChowElement(self.real + other.real, self.imag + other.imag)

    def times_real(self, c: ChowElement) -> "GaussianChowElement":
        return GaussianChowElement(self.real * c, self.imag * c)
