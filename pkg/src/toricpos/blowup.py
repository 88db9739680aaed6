"""Blow-ups of torus-fixed points: pullback, pushforward, the l-functional and eps-deformations.

With D the exceptional divisor, every class c of dimension k (1 <= k <= n-1)
on the blow-up decomposes as
    c = pi^* pi_* c + (-1)^{n-k} l(c) D^{n-k},   l(c) = (-1)^{k-1} deg(c . D^k).
Deforming gamma_j to pi^* gamma_j + eps_j D^{n-j} keeps positivity of the
pulled-back sheaf exactly when eps satisfies a normalization line and n-1 sign
constraints, provided all |eps_j| are below an explicit bound eta.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .charges import PolynomialCondition
from .chow import ChowElement, chow_ring, cone_class, degree, divisor, one, prime_divisor
from .fan import Cone, Fan, find_ample_divisor, star_subdivision
from .positivity import NormalizationError, check_positivity
from .sheaves import RawChern, SheafSpec, chern_character, sheaf_rank


class MeaninglessBoundError(ValueError):
    """The base sheaf is not uniformly positive, so no eta exists."""


class BlowupModel:
    def __init__(self, base: Fan, cone: Sequence[int]):
        self.base = base
        self.cone: Cone = tuple(sorted(cone))
        self.fan, self.exceptional = star_subdivision(base, self.cone)
        self.base_ring = chow_ring(base)
        self.ring = chow_ring(self.fan)
        self.D = prime_divisor(self.ring, self.exceptional)
        self._pulled_divisors = [
            prime_divisor(self.ring, i) + (self.D if i in self.cone else ChowElement.zero(self.ring))
            for i in range(len(base.rays))
        ]
        self._pullback_cache: dict[Cone, ChowElement] = {}

    @property
    def n(self) -> int:
        return self.base.rank

    def pullback(self, c: ChowElement) -> ChowElement:
        if c.fan != self.base:
            raise ValueError("class does not live on the base fan")
        out = ChowElement.zero(self.ring)
        for sigma, coef in c.terms():
            img = self._pullback_cache.get(sigma)
            if img is None:
                img = one(self.ring)
                for i in sigma:
                    img = img * self._pulled_divisors[i]
                self._pullback_cache[sigma] = img
            out = out + img * coef
        return out

    def pushforward(self, c: ChowElement) -> ChowElement:
        if c.fan != self.fan:
            raise ValueError("class does not live on the blown-up fan")
        terms: dict[Cone, Fraction] = {}
        for tau, coef in c.terms():
            if self.exceptional not in tau:
                image = tau
            elif len(tau) == self.n:
                image = self.cone
            else:
                continue
            terms[image] = terms.get(image, Fraction(0)) + coef
        return ChowElement.from_terms(self.base_ring, terms)

    def pullback_spec(self, spec: SheafSpec) -> RawChern:
        ch = chern_character(self.base, spec)
        return RawChern(sheaf_rank(self.base, spec), self.pullback(ch))

    def exceptional_class(self, k: int) -> ChowElement:
        """A k-plane inside D: V(cone(e, f)) for a face f of the blown-up cone of size n-1-k."""
        if not 0 <= k <= self.n - 1:
            raise ValueError(f"exceptional planes have dimension 0..{self.n - 1}")
        f = self.cone[: self.n - 1 - k]
        return cone_class(self.ring, tuple(sorted(f + (self.exceptional,))))

    def decomposition_residual(self, c: ChowElement) -> ChowElement:
        codim = c.pure_codim()
        if codim is None:
            return ChowElement.zero(self.ring) if not c.terms() else _raise_mixed()
        return c - self.pullback(self.pushforward(c)) - self.D ** codim * ((-1) ** codim * l_functional(self, c))


def _raise_mixed():
    raise ValueError("decomposition needs a class of pure codimension")


def blowup_fixed_point(fan: Fan, cone: Sequence[int]) -> BlowupModel:
    return BlowupModel(fan, cone)


def l_functional(model: BlowupModel, cls: ChowElement) -> Fraction:
    codim = cls.pure_codim()
    if codim is None:
        if not cls.terms():
            return Fraction(0)
        raise ValueError("l is defined on classes of pure codimension")
    k = model.n - codim
    sign = 1 if (k - 1) % 2 == 0 else -1
    return sign * degree(cls * model.D ** k)


@dataclass(frozen=True)
class EpsilonDeformation:
    eps: tuple[Fraction, ...]

    def __init__(self, eps: Iterable):
        object.__setattr__(self, "eps", tuple(Fraction(e) for e in eps))

    def __getitem__(self, j: int) -> Fraction:
        return self.eps[j]

    def __len__(self):
        return len(self.eps)

    def serialize(self) -> list[str]:
        return [str(e) for e in self.eps]


def build_tilde_polynomial(model: BlowupModel, P: PolynomialCondition, eps: EpsilonDeformation) -> PolynomialCondition:
    n = model.n
    if len(eps) != n + 1:
        raise ValueError(f"need {n + 1} epsilons")
    gammas = [model.pullback(P.gammas[j]) + model.D ** (n - j) * eps[j] for j in range(n + 1)]
    return PolynomialCondition(tuple(gammas), P.delta)


@dataclass
class EpsilonConditions:
    """eps_0 = ratio * eps_n, and sign_k * eps_{n-k} > 0 for k = 1..n-1."""

    n: int
    ratio: Fraction
    signs: dict[int, int]  # k -> required sign of eps_{n-k}

    def on_line(self, eps: EpsilonDeformation) -> bool:
        return eps[0] == self.ratio * eps[self.n]

    def signs_ok(self, eps: EpsilonDeformation) -> bool:
        return all(s * eps[self.n - k] > 0 for k, s in self.signs.items())

    def satisfied(self, eps: EpsilonDeformation) -> bool:
        return self.on_line(eps) and self.signs_ok(eps)

    def describe(self) -> dict:
        return {
            "equality": f"eps_0 = ({self.ratio}) * eps_{self.n}",
            "signs": [f"{'+' if s > 0 else '-'}eps_{self.n - k} > 0" for k, s in sorted(self.signs.items())],
        }


def epsilon_conditions(model: BlowupModel, spec: SheafSpec, delta: Sequence[int]) -> EpsilonConditions:
    n = model.n
    ch = chern_character(model.base, spec)
    rank = sheaf_rank(model.base, spec)
    ratio = (-1) ** n * degree(ch.component(n)) / rank
    signs = {k: (-1) ** k * int(delta[k]) for k in range(1, n)}
    return EpsilonConditions(n, ratio, signs)


@dataclass
class EtaBound:
    eta: Fraction
    per_dim: dict[int, dict[str, Fraction]]
    ample: tuple[int, ...]
    strong: bool = False

    def to_dict(self) -> dict:
        return {
            "eta": str(self.eta),
            "ample_divisor": list(self.ample),
            "strong": self.strong,
            "per_dim": {str(k): {name: str(v) for name, v in d.items()} for k, d in self.per_dim.items()},
        }


def eta_bound(model: BlowupModel, P: PolynomialCondition, spec: SheafSpec, delta: Sequence[int] | None = None,
              norms: str = "l1-pivot-basis", strong: bool = False) -> EtaBound:
    """eta = min_k eps_k / (2 (C'_k + C_k rk)) with exact constants over toric generators.

    eps_k: min over base orbit closures of dimension k of delta_k P / ||.||.
    C'_k: operator norm of x -> deg(ch_k(E) x) in the pivot-basis L1 norm.
    C_k: a constant with l(c) <= C_k ||pi_* c|| on the whole effective cone,
    obtained as max(0, M) * ||h|| where h(x) = deg(x A^k) for an ample A and
    M = max over non-exceptional generators of l(c) / h(pi_* c).
    """
    if norms != "l1-pivot-basis":
        raise ValueError(f"unsupported norm {norms!r}")
    if delta is not None:
        P = P.with_delta(delta)
    base, n = model.base, model.n
    rank = sheaf_rank(base, spec)
    ch = chern_character(base, spec)
    report = check_positivity(base, P, spec, strong=False, ch=ch)
    margins = report.margin_by_dim()
    if any(m <= 0 for m in margins.values()):
        raise MeaninglessBoundError(f"base margin is not positive: {report.margin}")
    A = find_ample_divisor(base)
    A_cls = divisor(model.base_ring, A)
    ring = model.base_ring
    per_dim = {}
    etas = []
    for k in range(1, n):
        codim = n - k
        basis = [cone_class(ring, c) for c in ring.basis_cones(codim)]
        chk = ch.component(k)
        c_prime = max((abs(degree(chk * b)) for b in basis), default=Fraction(0))
        Ak = A_cls ** k
        h_norm = max((abs(degree(b * Ak)) for b in basis), default=Fraction(0))
        M = None
        for tau in model.ring.cones[codim]:
            g = cone_class(model.ring, tau)
            push = model.pushforward(g)
            if not push.terms():
                continue
            ratio = l_functional(model, g) / degree(push * Ak)
            M = ratio if M is None else max(M, ratio)
        C = max(Fraction(0), M or Fraction(0)) * h_norm
        denom = 2 * (c_prime + C * rank)
        eta_k = margins[k] / denom if denom else None
        per_dim[k] = {"eps": margins[k], "C_prime": c_prime, "C": C, "M": M or Fraction(0), "h_norm": h_norm}
        if eta_k is not None:
            per_dim[k]["eta"] = eta_k
            etas.append(eta_k)
    if strong:
        etas.append(abs(P.gamma_n))
    if not etas:
        raise MeaninglessBoundError("no constraint determines eta")
    return EtaBound(min(etas), per_dim, A, strong)


@dataclass
class GridPoint:
    eps: EpsilonDeformation
    in_box: bool
    cond1: bool | None
    cond3: bool | None
    normalized: bool
    margin: Fraction | None = None
    failing: list = field(default_factory=list)

    @property
    def agree(self) -> bool | None:
        if not self.in_box:
            return None
        return self.cond1 == self.cond3


@dataclass
class EquivalenceReport:
    eta: EtaBound
    conditions: EpsilonConditions
    points: list[GridPoint]

    @property
    def checked(self) -> list[GridPoint]:
        return [p for p in self.points if p.in_box]

    @property
    def disagreements(self) -> list[GridPoint]:
        return [p for p in self.checked if not p.agree]

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def to_dict(self) -> dict:
        return {
            "eta": self.eta.to_dict(),
            "conditions": self.conditions.describe(),
            "checked": len(self.checked),
            "disagreements": len(self.disagreements),
            "points": [
                {
                    "eps": p.eps.serialize(),
                    "in_box": p.in_box,
                    "positive": p.cond1,
                    "conditions": p.cond3,
                    "normalized": p.normalized,
                    "margin": None if p.margin is None else str(p.margin),
                    "failing": [[e.dim, list(e.cone), str(e.value)] for e in p.failing],
                }
                for p in self.points
            ],
        }


def evaluate_deformation(model: BlowupModel, P: PolynomialCondition, spec: SheafSpec, eps: EpsilonDeformation,
                         strong: bool = False):
    """Positivity report of the pulled-back sheaf for the deformed condition (raises if not normalized)."""
    Pt = build_tilde_polynomial(model, P, eps)
    return check_positivity(model.fan, Pt, model.pullback_spec(spec), strong=strong)


def verify_epsilon_equivalence(model: BlowupModel, P: PolynomialCondition, spec: SheafSpec,
                            delta: Sequence[int] | None = None, eps_grid: Iterable[Sequence] = (),
                            strong: bool = False) -> EquivalenceReport:
    if delta is not None:
        P = P.with_delta(delta)
    eta = eta_bound(model, P, spec, strong=strong)
    conds = epsilon_conditions(model, spec, P.delta)
    pulled = model.pullback_spec(spec)
    points = []
    for raw in eps_grid:
        eps = EpsilonDeformation(raw)
        in_box = all(abs(e) < eta.eta for e in eps.eps)
        Pt = build_tilde_polynomial(model, P, eps)
        try:
            rep = check_positivity(model.fan, Pt, pulled, strong=strong)
            pt = GridPoint(eps, in_box, rep.verdict, conds.satisfied(eps), True, rep.margin, rep.failures())
        except NormalizationError:
            pt = GridPoint(eps, in_box, False, conds.satisfied(eps), False)
        points.append(pt)
    return EquivalenceReport(eta, conds, points)


def epsilon_grid(eta: Fraction, conds: EpsilonConditions, steps: int = 9) -> list[tuple[Fraction, ...]]:
    """A product grid in eps_1..eps_n strictly inside the eta box, eps_0 placed on the equality line.

    eps_n is additionally shrunk by max(1, |ratio|) so that eps_0 stays inside the box.
    """
    n = conds.n
    half = steps // 2
    values = [Fraction(t, half + 1) * eta for t in range(-half, steps - half)]
    shrink = max(Fraction(1), abs(conds.ratio))
    from itertools import product

    grid = []
    for combo in product(values, repeat=n):
        eps = list(combo)
        eps[-1] = eps[-1] / shrink
        grid.append(tuple([conds.ratio * eps[-1]] + eps))
    return grid
