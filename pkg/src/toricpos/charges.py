"""Polynomial central charges, polynomial conditions, and their evaluation on cycles.

A central charge Z = (L, rho, U) gives
    Z_V(E) = deg( sum_j rho_j L^j U ch(E) . [V] ),
and a polynomial condition is a list gamma_0..gamma_n with gamma_j of
codimension n - j, evaluated as P_V(E) = deg( sum_j gamma_j ch(E) . [V] ).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence, Union

from .chow import ChowElement, ChowRing, chow_ring, divisor, intersection_number, one
from .fan import Fan, is_ample
from .sheaves import SheafSpec, chern_character


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex number re + i*im with rational parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    @classmethod
    def coerce(cls, z) -> "GaussianRational":
        if isinstance(z, GaussianRational):
            return z
        if isinstance(z, (int, Fraction)):
            return cls(z, 0)
        if isinstance(z, (tuple, list)) and len(z) == 2:
            return cls(*z)
        raise TypeError(f"cannot read {z!r} as a Gaussian rational")

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __add__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.coerce(other))

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero")
        num = self * o.conj()
        return GaussianRational(num.re / d, num.im / d)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def serialize(self) -> list[str]:
        return [str(self.re), str(self.im)]

    def __repr__(self):
        return f"({self.re} + {self.im}i)"


I = GaussianRational(0, 1)
Scalar = Union[GaussianRational, complex]


def im_pair(z, w):
    """Im(z * conj(w)); exact for Gaussian rationals."""
    if isinstance(z, complex) or isinstance(w, complex):
        z, w = complex(z), complex(w)
        return (z * w.conjugate()).imag
    z, w = GaussianRational.coerce(z), GaussianRational.coerce(w)
    return (z * w.conj()).im


@dataclass(eq=False)
class CentralCharge:
    """Z = (L, rho, U). ``ample`` is True/False when L came with ray coefficients to certify."""

    rho: tuple
    U: ChowElement
    L: ChowElement
    ample: bool | None = None

    def __post_init__(self):
        n = self.U.n
        if len(self.rho) != n + 1:
            raise ValueError(f"need {n + 1} stability-vector entries, got {len(self.rho)}")
        self.rho = tuple(r if isinstance(r, complex) else GaussianRational.coerce(r) for r in self.rho)
        if self.U.scalar() != 1:
            raise ValueError("U must have degree-0 part 1")
        if self.L.codims() not in ([], [1]):
            raise ValueError("L must be a divisor class")
        if self.U.fan != self.L.fan:
            raise ValueError("U and L live on different fans")
        for j in range(n):
            a, b = self.rho[j], self.rho[j + 1]
            if isinstance(a, complex) or isinstance(b, complex):
                ok = (complex(a) / complex(b)).imag > 0
            else:
                ok = (a / b).im > 0
            if not ok:
                raise ValueError(f"Im(rho_{j}/rho_{j + 1}) must be positive")

    @property
    def n(self) -> int:
        return self.U.n

    @property
    def fan(self) -> Fan:
        return self.U.fan

    @property
    def approximate(self) -> bool:
        return any(isinstance(r, complex) for r in self.rho)


def dhym_stability_vector(n: int) -> tuple[GaussianRational, ...]:
    """rho_j = -(-i)^j / j!, the coefficients of -e^{-iL}."""
    out, power = [], GaussianRational(1)
    for j in range(n + 1):
        out.append(-power / factorial(j))
        power = power * GaussianRational(0, -1)
    return tuple(out)


def _as_divisor(fan: Fan, L) -> tuple[ChowElement, bool | None]:
    if isinstance(L, ChowElement):
        return L, None
    coeffs = [Fraction(c) for c in L]
    return divisor(chow_ring(fan), coeffs), is_ample(fan, coeffs)


def build_dhym_charge(fan: Fan, L) -> CentralCharge:
    """dHYM charge Z(E) = -deg(e^{-iL} ch(E)); L as a class or as ray coefficients."""
    Lc, ample = _as_divisor(fan, L)
    return CentralCharge(dhym_stability_vector(fan.rank), one(chow_ring(fan)), Lc, ample)


def charge_classes(Z: CentralCharge, ch: ChowElement) -> list[ChowElement]:
    """The cycle-independent classes L^j U ch(E), j = 0..n."""
    base = Z.U * ch
    out = [base]
    for _ in range(Z.n):
        out.append(out[-1] * Z.L)
    return out


def charge_value(Z: CentralCharge, spec: SheafSpec, cycle: ChowElement | None = None, ch: ChowElement | None = None,
                 classes: Sequence[ChowElement] | None = None):
    """Z_cycle(spec); exact unless the stability vector has float entries.

    ``classes`` may carry precomputed ``charge_classes(Z, ch)`` when many cycles are evaluated.
    """
    ring = Z.U.ring
    cycle = one(ring) if cycle is None else cycle
    if classes is None:
        ch = chern_character(Z.fan, spec) if ch is None else ch
        classes = charge_classes(Z, ch)
    integrals = [intersection_number(c, cycle) for c in classes]
    if Z.approximate:
        return sum((complex(r) * float(x) for r, x in zip(Z.rho, integrals)), 0j)
    total = GaussianRational(0)
    for r, x in zip(Z.rho, integrals):
        total = total + r * x
    return total


@dataclass(eq=False)
class PolynomialCondition:
    """gamma_j (codimension n - j) for j = 0..n, with signs delta_0..delta_{n-1}."""

    gammas: tuple[ChowElement, ...]
    delta: tuple[int, ...] = ()

    def __post_init__(self):
        self.gammas = tuple(self.gammas)
        n = self.gammas[0].n
        if len(self.gammas) != n + 1:
            raise ValueError(f"need {n + 1} coefficients, got {len(self.gammas)}")
        for j, g in enumerate(self.gammas):
            if g.fan != self.gammas[0].fan:
                raise ValueError("coefficients live on different fans")
            if any(k != n - j for k in g.codims()):
                raise ValueError(f"gamma_{j} must be of pure codimension {n - j}")
        if not self.delta:
            self.delta = (1,) * n
        self.delta = tuple(int(d) for d in self.delta)
        if len(self.delta) != n or any(d not in (1, -1) for d in self.delta):
            raise ValueError(f"delta must be {n} signs")

    @property
    def n(self) -> int:
        return self.gammas[0].n

    @property
    def fan(self) -> Fan:
        return self.gammas[0].fan

    @property
    def ring(self) -> ChowRing:
        return self.gammas[0].ring

    def total_class(self) -> ChowElement:
        out = ChowElement.zero(self.ring)
        for g in self.gammas:
            out = out + g
        return out

    @property
    def gamma_n(self) -> Fraction:
        return self.gammas[self.n].scalar()

    def scaled(self, c) -> "PolynomialCondition":
        return PolynomialCondition(tuple(g * Fraction(c) for g in self.gammas), self.delta)

    def with_delta(self, delta: Sequence[int]) -> "PolynomialCondition":
        return PolynomialCondition(self.gammas, tuple(delta))

    @classmethod
    def from_class(cls, total: ChowElement, delta: Sequence[int] = ()) -> "PolynomialCondition":
        n = total.n
        return cls(tuple(total.component(n - j) for j in range(n + 1)), tuple(delta))


def charge_to_polynomial(Z: CentralCharge, spec: SheafSpec, delta: Sequence[int] = (), ch: ChowElement | None = None):
    """gamma_j = sum_{k+i = n-j} Im(conj(Z_X) rho_k) L^k U_i, so that P_c = Im(conj(Z_X) Z_c)."""
    if Z.approximate:
        raise ValueError("exact conversion needs a Gaussian-rational stability vector")
    ch = chern_character(Z.fan, spec) if ch is None else ch
    zx = charge_value(Z, spec, ch=ch)
    ring = Z.U.ring
    series, power = ChowElement.zero(ring), one(ring)
    for k in range(Z.n + 1):
        series = series + power * im_pair(Z.rho[k], zx)
        power = power * Z.L
    # im_pair(rho_k, Z_X) = Im(rho_k conj(Z_X))
    return PolynomialCondition.from_class(series * Z.U, delta)


def evaluate_polynomial_condition(P: PolynomialCondition, spec: SheafSpec, cycle: ChowElement | None = None,
                                  fan: Fan | None = None, ch: ChowElement | None = None) -> Fraction:
    fan = P.fan if fan is None else fan
    if fan != P.fan:
        raise ValueError("condition lives on a different fan")
    cycle = one(P.ring) if cycle is None else cycle
    ch = chern_character(fan, spec) if ch is None else ch
    return intersection_number(P.total_class() * ch, cycle)


def phase_polynomial(fan: Fan, omega, phase) -> PolynomialCondition:
    """The dHYM polynomial P(x) = -Im(e^{-i theta} e^{x - i omega}) with e^{-i theta} = ``phase``.

    gamma_j = -Im(phase (-i)^{n-j}) omega^{n-j} / (n-j)!.
    """
    ring = chow_ring(fan)
    w = omega if isinstance(omega, ChowElement) else divisor(ring, omega)
    phase = GaussianRational.coerce(phase)
    n = fan.rank
    gammas = []
    for j in range(n + 1):
        k = n - j
        c = -(phase * _neg_i_power(k)).im
        gammas.append((w ** k) * (c / factorial(k)))
    return PolynomialCondition(tuple(gammas))


def _neg_i_power(k: int) -> GaussianRational:
    out = GaussianRational(1)
    for _ in range(k):
        out = out * GaussianRational(0, -1)
    return out


def arccot(x: float) -> float:
    """Inverse cotangent valued in (0, pi)."""
    return math.pi / 2 - math.atan(x)


def dhym_phase_product_of_curves(degrees: Sequence[int]) -> float:
    return math.fsum(arccot(d) for d in degrees)
