"""Equivariant stability over enumerated saturated subsheaves, and alpha-Hilbert polynomials."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence, Union

from .charges import PolynomialCondition, evaluate_polynomial_condition
from .chow import ChowElement, chow_ring, degree, divisor, todd_class
from .fan import Fan
from .linalg import Subspace
from .sheaves import (
    Filtration,
    FiltrationFamily,
    SheafSpec,
    UnsupportedSheafError,
    chern_character,
    enumerate_equivariant_subsheaves,
    sheaf_rank,
    split_decomposition,
)


@dataclass(frozen=True)
class ParametricValue:
    """A polynomial in m with rational coefficients, lowest degree first."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Sequence = ()):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, j: int) -> Fraction:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else Fraction(0)

    def __add__(self, other: "ParametricValue") -> "ParametricValue":
        k = max(len(self.coeffs), len(other.coeffs))
        return ParametricValue([self.coefficient(j) + other.coefficient(j) for j in range(k)])

    def __neg__(self):
        return ParametricValue([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        return ParametricValue([Fraction(c) * x for x in self.coeffs])

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / Fraction(c))

    def __call__(self, m) -> Fraction:
        out = Fraction(0)
        for c in reversed(self.coeffs):
            out = out * m + c
        return out

    def serialize(self) -> list[str]:
        return [str(c) for c in self.coeffs]


class Comparison(enum.Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"


def compare_asymptotic(f: ParametricValue, g: ParametricValue) -> Comparison:
    d = g - f
    if not d.coeffs:
        return Comparison.EQUAL
    return Comparison.LESS if d.coeffs[-1] > 0 else Comparison.GREATER


def cauchy_threshold(f: ParametricValue, g: ParametricValue) -> Fraction | None:
    """m0 beyond which sign(g(m) - f(m)) equals the sign of its leading coefficient."""
    d = g - f
    if not d.coeffs:
        return None
    lead = d.coeffs[-1]
    return 1 + max((abs(c / lead) for c in d.coeffs[:-1]), default=Fraction(0))


def alpha_hilbert(fan: Fan, alpha: Sequence[ChowElement], spec: SheafSpec, ch: ChowElement | None = None) -> ParametricValue:
    """P_alpha(E, m) = sum_j (1/j!) deg(ch(E) alpha_j Td) m^j."""
    n = fan.rank
    if len(alpha) != n + 1:
        raise ValueError(f"alpha needs {n + 1} classes, got {len(alpha)}")
    for j, a in enumerate(alpha):
        if any(k != j for k in a.codims()):
            raise ValueError(f"alpha_{j} must have pure codimension {j}")
    ch = chern_character(fan, spec) if ch is None else ch
    base = ch * todd_class(fan)
    return ParametricValue([degree(base * a) / factorial(j) for j, a in enumerate(alpha)])


def _as_class(fan: Fan, L) -> ChowElement:
    return L if isinstance(L, ChowElement) else divisor(chow_ring(fan), L)


def slope_degree(fan: Fan, L, spec: SheafSpec, ch: ChowElement | None = None) -> Fraction:
    ch = chern_character(fan, spec) if ch is None else ch
    return degree(ch.component(1) * _as_class(fan, L) ** (fan.rank - 1))


def slope_data(fan: Fan, L, spec: SheafSpec) -> Fraction:
    """deg(c_1(E) L^{n-1}) / rk(E)."""
    return slope_degree(fan, L, spec) / sheaf_rank(fan, spec)


@dataclass(eq=False)
class AlphaCondition:
    alpha: tuple[ChowElement, ...]
    asymptotic: bool = True
    adapted: bool = True  # assumed for ample alpha_j; not decided algorithmically


@dataclass(eq=False)
class SlopeCondition:
    L: object


Condition = Union[PolynomialCondition, AlphaCondition, SlopeCondition]


@dataclass
class CandidateResult:
    subspace: Subspace
    rank: int
    line_bundles: list[tuple[Fraction, ...]] | None
    value: Fraction | ParametricValue | None
    status: str  # pass | fail | undecided
    m0: Fraction | None = None

    def to_dict(self) -> dict:
        v = self.value
        return {
            "subspace": [[str(x) for x in b] for b in self.subspace.basis],
            "rank": self.rank,
            "line_bundles": None if self.line_bundles is None else [[str(x) for x in lb] for lb in self.line_bundles],
            "value": None if v is None else (v.serialize() if isinstance(v, ParametricValue) else str(v)),
            "status": self.status,
            **({"m0": str(self.m0)} if self.m0 is not None else {}),
        }


@dataclass
class StabilityReport:
    candidates: list[CandidateResult]
    mode: str
    reference: Fraction | ParametricValue
    strict: bool = True
    adapted: bool | None = None

    @property
    def undecided(self) -> list[CandidateResult]:
        return [c for c in self.candidates if c.status == "undecided"]

    @property
    def verdict(self) -> bool:
        return all(c.status != "fail" for c in self.candidates)

    @property
    def caveat(self) -> str:
        if self.undecided:
            return "among decidable candidates"
        return "among enumerated subsheaves"

    def to_dict(self) -> dict:
        ref = self.reference
        return {
            "verdict": self.verdict,
            "caveat": self.caveat,
            "mode": self.mode,
            "strict": self.strict,
            "adapted": self.adapted,
            "reference": ref.serialize() if isinstance(ref, ParametricValue) else str(ref),
            "candidates": [c.to_dict() for c in self.candidates],
        }


def _value(fan: Fan, condition: Condition, spec: SheafSpec, ch: ChowElement):
    if isinstance(condition, PolynomialCondition):
        return evaluate_polynomial_condition(condition, spec, fan=fan, ch=ch)
    if isinstance(condition, AlphaCondition):
        p = alpha_hilbert(fan, condition.alpha, spec, ch=ch)
        return p if condition.asymptotic else p(1)
    if isinstance(condition, SlopeCondition):
        return slope_degree(fan, condition.L, spec, ch=ch)
    raise TypeError(f"unknown condition {condition!r}")


def _key(s: Subspace):
    return (s.dim, s.basis)


def check_equivariant_stability(fan: Fan, condition: Condition, family: FiltrationFamily, mode: str | None = None,
                                spec: SheafSpec | None = None,
                                candidate_ch: Mapping[tuple, ChowElement] | None = None,
                                strict: bool = True) -> StabilityReport:
    """Compare the sheaf against every enumerated saturated equivariant subsheaf.

    ``spec`` supplies the Chern character of the sheaf itself when its family
    does not split (e.g. ``Tangent()``). ``candidate_ch`` maps a candidate's
    canonical key (dim, RREF basis) to its Chern character for non-split
    candidates; without it such candidates are reported as undecided.
    """
    if mode is None:
        mode = "raw" if isinstance(condition, PolynomialCondition) else "rank-reduced"
    if mode not in ("raw", "rank-reduced"):
        raise ValueError(f"unknown comparison mode {mode!r}")
    spec = Filtration(family) if spec is None else spec
    ch_E = chern_character(fan, spec)
    rank_E = family.rank
    if ch_E.scalar() != rank_E:
        raise ValueError("sheaf rank does not match the filtration family")
    ref = _value(fan, condition, spec, ch_E)
    if mode == "rank-reduced":
        ref = ref / rank_E
    candidate_ch = candidate_ch or {}
    results = []
    for sub, induced in enumerate_equivariant_subsheaves(family):
        split = split_decomposition(induced)
        lbs = None if split is None else [lb.coefficients for _, lb in split]
        try:
            ch_F = candidate_ch.get(_key(sub)) or chern_character(fan, Filtration(induced))
        except UnsupportedSheafError:
            results.append(CandidateResult(sub, induced.rank, lbs, None, "undecided"))
            continue
        val = _value(fan, condition, Filtration(induced), ch_F)
        if mode == "rank-reduced":
            val = val / induced.rank
        m0 = None
        if isinstance(val, ParametricValue):
            cmp = compare_asymptotic(val, ref)
            ok = cmp is Comparison.LESS or (not strict and cmp is Comparison.EQUAL)
            m0 = cauchy_threshold(val, ref)
        else:
            ok = val < ref or (not strict and val == ref)
        results.append(CandidateResult(sub, induced.rank, lbs, val, "pass" if ok else "fail", m0))
    adapted = condition.adapted if isinstance(condition, AlphaCondition) else None
    return StabilityReport(results, mode, ref, strict, adapted)
