"""Finite positivity checks over torus orbit closures.

On a toric variety it suffices to test the sign conditions on the orbit
closures V(sigma): a k-dimensional cycle is tested against delta_k and the
sign must be strictly positive. Exact zeros are reported as "degenerate".
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .charges import (
    CentralCharge,
    GaussianRational,
    PolynomialCondition,
    build_dhym_charge,
    charge_to_polynomial,
    charge_classes,
    charge_value,
    evaluate_polynomial_condition,
)
from .chow import ChowElement, chow_ring, cone_class, intersection_number, one, pair_reduced
from .fan import Cone, Fan
from .sheaves import SheafSpec, chern_character

NORM_NAME = "l1-pivot-basis"


class NormalizationError(ValueError):
    """P_X(E) must vanish before positivity is meaningful."""


@dataclass
class ConeResult:
    dim: int  # dimension of the orbit closure
    cone: Cone
    value: Fraction
    sign: int
    norm: Fraction
    charge: GaussianRational | None = None

    @property
    def signed(self) -> Fraction:
        return self.sign * self.value

    @property
    def status(self) -> str:
        if self.value == 0:
            return "degenerate"
        return "pass" if self.signed > 0 else "fail"

    @property
    def passed(self) -> bool:
        return self.signed > 0


@dataclass
class PositivityReport:
    entries: list[ConeResult]
    strong: bool
    total: Fraction
    gamma_n: Fraction
    delta: tuple[int, ...]
    charge_total: GaussianRational | None = None
    norm: str = NORM_NAME

    @property
    def verdict(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def margin(self) -> Fraction | None:
        if not self.entries:
            return None
        return min(e.signed / e.norm for e in self.entries)

    def margin_by_dim(self) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for e in self.entries:
            m = e.signed / e.norm
            out[e.dim] = min(out.get(e.dim, m), m)
        return out

    @property
    def gamma_n_condition(self) -> bool:
        return self.delta[0] * self.gamma_n > 0

    def failures(self) -> list[ConeResult]:
        return [e for e in self.entries if not e.passed]

    def to_dict(self) -> dict:
        d = {
            "verdict": self.verdict,
            "strong": self.strong,
            "delta": list(self.delta),
            "P_X": str(self.total),
            "gamma_n": str(self.gamma_n),
            "norm": self.norm,
            "margin": None if self.margin is None else str(self.margin),
            "cones": [
                {
                    "dim": e.dim,
                    "cone": list(e.cone),
                    "value": str(e.value),
                    "sign": e.sign,
                    "status": e.status,
                    **({"charge": e.charge.serialize()} if e.charge is not None else {}),
                }
                for e in self.entries
            ],
        }
        if self.charge_total is not None:
            d["Z_X"] = self.charge_total.serialize()
        return d


def tested_dims(n: int, strong: bool) -> list[int]:
    return list(range(0 if strong else 1, n))


def check_positivity(fan: Fan, P: PolynomialCondition, spec: SheafSpec, strong: bool = False,
                     ch: ChowElement | None = None, charge: CentralCharge | None = None) -> PositivityReport:
    """Evaluate delta_k P_{V(sigma)}(E) on every orbit closure of dimension 1..n-1 (0 too if strong)."""
    ring = chow_ring(fan)
    ch = chern_character(fan, spec) if ch is None else ch
    base = P.total_class() * ch
    total = intersection_number(base, one(ring))
    if total != 0:
        raise NormalizationError(f"P_X(E) = {total} is not zero")
    classes = charge_classes(charge, ch) if charge is not None else None
    n = fan.rank
    entries = []
    for k in tested_dims(n, strong):
        codim = n - k
        partner = base.reduced(n - codim)
        for cone in ring.cones[codim]:
            coords = ring.cone_coordinates(cone)
            value = pair_reduced(ring, n - codim, partner, coords)
            z = charge_value(charge, spec, cone_class(ring, cone), classes=classes) if charge is not None else None
            entries.append(ConeResult(k, cone, value, P.delta[k], sum((abs(x) for x in coords), Fraction(0)), z))
    return PositivityReport(entries, strong, total, P.gamma_n, P.delta,
                            charge_value(charge, spec, classes=classes) if charge is not None else None)


def check_charge_positivity(fan: Fan, Z: CentralCharge, spec: SheafSpec, strong: bool = False) -> PositivityReport:
    ch = chern_character(fan, spec)
    P = charge_to_polynomial(Z, spec, ch=ch)
    return check_positivity(fan, P, spec, strong, ch=ch, charge=Z)


def positivity_margin(fan: Fan, P: PolynomialCondition, spec: SheafSpec, norm: str = NORM_NAME,
                      strong: bool = False) -> Fraction:
    """min over orbit-closure generators of delta_k P_gen / ||gen||."""
    if norm != NORM_NAME:
        raise ValueError(f"unsupported norm {norm!r}; only {NORM_NAME!r} is implemented")
    margin = check_positivity(fan, P, spec, strong).margin
    if margin is None:
        raise ValueError("no cycles to test (dimension too small)")
    return margin


@dataclass
class ScanPoint:
    a: Fraction
    b: Fraction
    verdict: bool
    min_value: Fraction


@dataclass
class ScanReport:
    points: list[ScanPoint]
    brackets: dict[Fraction, list[tuple[Fraction, Fraction]]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "points": [{"a": str(p.a), "b": str(p.b), "verdict": p.verdict, "min_value": str(p.min_value)}
                       for p in self.points],
            "brackets": {str(a): [[str(lo), str(hi)] for lo, hi in br] for a, br in self.brackets.items()},
        }


def ample_scan(fan: Fan, L_of: Callable[[Fraction, Fraction], Sequence], spec: SheafSpec,
               a_values: Sequence, b_values: Sequence,
               charge_builder: Callable[[Fan, Sequence], CentralCharge] = build_dhym_charge) -> ScanReport:
    """Z-positivity over a rational (a, b) grid with sign-change brackets in b for each a.

    ``L_of(a, b)`` returns the ray coefficients of the polarization.
    """
    points, brackets = [], {}
    for a in a_values:
        a = Fraction(a)
        row = []
        for b in sorted(Fraction(x) for x in b_values):
            Z = charge_builder(fan, L_of(a, b))
            rep = check_charge_positivity(fan, Z, spec)
            pt = ScanPoint(a, b, rep.verdict, min(e.signed for e in rep.entries))
            row.append(pt)
        points.extend(row)
        brackets[a] = [(p.b, q.b) for p, q in zip(row, row[1:]) if p.verdict != q.verdict]
    return ScanReport(points, brackets)


def random_effective_check(fan: Fan, P: PolynomialCondition, spec: SheafSpec, rng, samples: int = 200,
                           max_coeff: int = 5) -> list[tuple[int, bool]]:
    """Sign tests on random nonzero effective combinations of orbit closures (per dimension)."""
    ring = chow_ring(fan)
    ch = chern_character(fan, spec)
    n = fan.rank
    out = []
    for _ in range(samples):
        k = rng.randrange(1, n) if n > 1 else 0
        cones = ring.cones[n - k]
        coeffs = [rng.randrange(0, max_coeff + 1) for _ in cones]
        if not any(coeffs):
            coeffs[rng.randrange(len(cones))] = 1
        c = ChowElement.from_terms(ring, dict(zip(cones, coeffs)))
        value = evaluate_polynomial_condition(P, spec, c, fan=fan, ch=ch)
        out.append((k, P.delta[k] * value > 0))
    return out
