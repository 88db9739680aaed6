"""Command-line interface: strict JSON configs in, deterministic JSON reports out.

Exit codes: 0 computed, 1 negative verdict under --assert-positive/--assert-stable,
2 input error.
"""
from __future__ import annotations

import argparse
import ast
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import blowup as bl
from .charges import (
    CentralCharge,
    GaussianRational,
    PolynomialCondition,
    build_dhym_charge,
    charge_to_polynomial,
    phase_polynomial,
)
from .chow import ChowElement, chow_ring, degree, divisor, one, point_class
from .fan import FanError, UnsupportedFanError, validate_fan
from .linalg import Subspace
from .positivity import NormalizationError, ample_scan, check_charge_positivity, check_positivity
from .sheaves import (
    DirectSum,
    EnumerationLimitError,
    Filtration,
    FiltrationFamily,
    LineBundle,
    RawChern,
    Tangent,
    UnsupportedSheafError,
    chern_character,
    direct_sum_filtration,
    sheaf_rank,
    tangent_filtration,
)
from .stability import AlphaCondition, SlopeCondition, check_equivariant_stability
from .varieties import BUILTINS, Variety, custom_variety

SCHEMA_VERSION = 1
COMMANDS = ("positivity", "stability", "blowup", "scan", "intersect", "chern")


class ConfigError(ValueError):
    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


# ---- small exact parsers ------------------------------------------------------


def parse_rational(x: Any, path: str) -> Fraction:
    """Integers or "p/q" strings only; anything decimal is rejected."""
    if isinstance(x, bool):
        raise ConfigError([f"{path}: expected a rational, got a boolean"])
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if any(c in s for c in ".eE") or not s:
            raise ConfigError([f"{path}: {x!r} is not an exact rational (use 'p/q')"])
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError):
            raise ConfigError([f"{path}: cannot parse {x!r} as a rational"]) from None
    raise ConfigError([f"{path}: expected an integer or 'p/q' string, got {type(x).__name__}"])


def parse_int(x: Any, path: str, minimum: int | None = None) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ConfigError([f"{path}: expected an integer"])
    if minimum is not None and x < minimum:
        raise ConfigError([f"{path}: must be at least {minimum}"])
    return x


_BINOPS = {ast.Add: lambda a, b: a + b, ast.Sub: lambda a, b: a - b, ast.Mult: lambda a, b: a * b}


def eval_expression(text: str, names: dict[str, Any], path: str):
    """Evaluate a class expression like "2*H - F + H*F/2" over exact values.

    Only + - * /, integer powers, integer literals and known names are allowed.
    """
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError:
        raise ConfigError([f"{path}: cannot parse expression {text!r}"]) from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id not in names:
                raise ConfigError([f"{path}: unknown name {node.id!r} (known: {', '.join(sorted(names))})"])
            return names[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            if type(node.op) in _BINOPS:
                return _BINOPS[type(node.op)](a, b)
            if isinstance(node.op, ast.Div):
                if not isinstance(b, Fraction) or b == 0:
                    raise ConfigError([f"{path}: can only divide by nonzero numbers"])
                return a / b
            if isinstance(node.op, ast.Pow):
                if not isinstance(b, Fraction) or b.denominator != 1 or b < 0:
                    raise ConfigError([f"{path}: exponents must be non-negative integers"])
                return a ** int(b)
        raise ConfigError([f"{path}: unsupported syntax in {text!r}"])

    return ev(tree)


def _class_names(variety: Variety) -> dict[str, ChowElement]:
    ring = chow_ring(variety.fan)
    names = {k: divisor(ring, v) for k, v in variety.names().items()}
    names["X"] = one(ring)
    names["pt"] = point_class(ring)
    return names


def parse_class(text: Any, variety: Variety, path: str, extra: dict | None = None) -> ChowElement:
    if not isinstance(text, str):
        raise ConfigError([f"{path}: expected a class expression string"])
    names = _class_names(variety)
    if extra:
        names.update(extra)
    v = eval_expression(text, names, path)
    if isinstance(v, Fraction):
        v = one(chow_ring(variety.fan)) * v
    return v


def parse_divisor(text: Any, variety: Variety, path: str, extra: dict | None = None) -> tuple[Fraction, ...]:
    c = parse_class(text, variety, path, extra)
    if c.codims() not in ([], [1]):
        raise ConfigError([f"{path}: {text!r} is not a divisor class"])
    return c.parts[1]


# ---- config schema ------------------------------------------------------------


def _reject_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise ConfigError([f"duplicate key {k!r}"])
        out[k] = v
    return out


def _expect_keys(obj: Any, path: str, required: set[str], optional: set[str] = frozenset()) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError([f"{path}: expected an object"])
    errors = [f"{path}: missing field {k!r}" for k in sorted(required - obj.keys())]
    errors += [f"{path}: unknown field {k!r}" for k in sorted(obj.keys() - required - optional)]
    if errors:
        raise ConfigError(errors)
    return obj


@dataclass
class Options:
    strong: bool = False
    mode: str | None = None
    delta: tuple[int, ...] | None = None
    grid: str | None = None
    epsilon: Any = "auto"
    epsilon_steps: int = 9
    blowup_cone: tuple[int, ...] | None = None
    scan_L: str | None = None
    expressions: tuple[str, ...] = ()


@dataclass
class JobConfig:
    variety: Variety
    sheaf: Any = None
    condition: tuple[str, Any] | None = None
    options: Options = field(default_factory=Options)
    command: str | None = None
    raw: dict = field(default_factory=dict)


def _parse_variety(obj: Any) -> Variety:
    if isinstance(obj, dict) and "builtin" in obj:
        name = obj["builtin"]
        params = {"hirzebruch": {"r"}, "projective_space": {"n"}, "p1_product": {"k"},
                  "p1xp1_projbundle": set(), "p2_projbundle": set()}
        if name not in params:
            raise ConfigError([f"variety.builtin: unknown builtin {name!r} (known: {', '.join(sorted(params))})"])
        _expect_keys(obj, "variety", {"builtin"} | params[name])
        args = {}
        for p in params[name]:
            if not isinstance(obj[p], int) or isinstance(obj[p], bool):
                raise ConfigError([f"variety.{p}: expected an integer"])
            args[p] = obj[p]
        if name == "hirzebruch" and args["r"] < 0:
            raise ConfigError(["variety.r: must be non-negative"])
        if name in ("projective_space", "p1_product") and list(args.values())[0] < 1:
            raise ConfigError(["variety: dimension must be positive"])
        return BUILTINS[name](**args)
    _expect_keys(obj, "variety", {"rays", "max_cones"}, {"labels"})
    try:
        v = custom_variety(obj["rays"], obj["max_cones"], obj.get("labels"))
    except (FanError, ValueError, TypeError) as exc:
        raise ConfigError([f"variety: {exc}"]) from None
    report = validate_fan(v.fan)
    if not report.ok:
        raise ConfigError([f"variety: {d}" for d in report.diagnostics])
    return v


def _parse_sheaf(obj: Any, variety: Variety, path: str = "sheaf"):
    if not isinstance(obj, dict) or "type" not in obj:
        raise ConfigError([f"{path}: expected an object with a 'type'"])
    t = obj["type"]
    if t == "tangent":
        _expect_keys(obj, path, {"type"})
        return Tangent()
    if t == "line_bundle":
        _expect_keys(obj, path, {"type", "divisor"})
        return LineBundle(parse_divisor(obj["divisor"], variety, f"{path}.divisor"))
    if t == "direct_sum":
        _expect_keys(obj, path, {"type", "parts"})
        if not isinstance(obj["parts"], list) or not obj["parts"]:
            raise ConfigError([f"{path}.parts: expected a non-empty list"])
        return DirectSum([_parse_sheaf(p, variety, f"{path}.parts[{i}]") for i, p in enumerate(obj["parts"])])
    if t == "raw_chern":
        _expect_keys(obj, path, {"type", "rank", "ch"})
        ch = parse_class(obj["ch"], variety, f"{path}.ch")
        try:
            return RawChern(parse_int(obj["rank"], f"{path}.rank", 1), ch)
        except ValueError as exc:
            raise ConfigError([f"{path}: {exc}"]) from None
    if t == "filtration":
        _expect_keys(obj, path, {"type", "rank", "steps"})
        r = parse_int(obj["rank"], f"{path}.rank", 1)
        steps = obj["steps"]
        if not isinstance(steps, list) or len(steps) != len(variety.fan.rays):
            raise ConfigError([f"{path}.steps: need one step list per ray ({len(variety.fan.rays)})"])
        raw = []
        for a, ray_steps in enumerate(steps):
            lst = []
            if not isinstance(ray_steps, list):
                raise ConfigError([f"{path}.steps[{a}]: expected a list of steps"])
            for s_i, st in enumerate(ray_steps):
                p = f"{path}.steps[{a}][{s_i}]"
                _expect_keys(st, p, {"i", "span"})
                if not isinstance(st["span"], list) or not all(isinstance(v, list) for v in st["span"]):
                    raise ConfigError([f"{p}.span: expected a list of vectors"])
                vecs = [[parse_rational(x, p) for x in v] for v in st["span"]]
                if any(len(v) != r for v in vecs):
                    raise ConfigError([f"{p}: vectors must have length {r}"])
                lst.append((parse_int(st["i"], f"{p}.i"), Subspace.span(vecs, r)))
            raw.append(lst)
        try:
            return Filtration(FiltrationFamily.build(Subspace.full(r), raw))
        except ValueError as exc:
            raise ConfigError([f"{path}: {exc}"]) from None
    raise ConfigError([f"{path}.type: unknown sheaf type {t!r}"])


_CONDITION_KINDS = ("charge", "polynomial", "alpha", "slope")


def _parse_condition(obj: Any, variety: Variety):
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ConfigError([f"condition: expected exactly one of {', '.join(_CONDITION_KINDS)}"])
    (kind, body), = obj.items()
    path = f"condition.{kind}"
    fan = variety.fan
    if kind == "charge":
        if isinstance(body, dict) and body.get("type") == "dhym":
            _expect_keys(body, path, {"type", "L"})
            return kind, ("dhym", body["L"])
        _expect_keys(body, path, {"rho", "L"}, {"U"})
        try:
            rho = [GaussianRational(parse_rational(z[0], path), parse_rational(z[1], path)) for z in body["rho"]]
        except (TypeError, IndexError, KeyError):
            raise ConfigError([f"{path}.rho: expected a list of [re, im] pairs"]) from None
        L = parse_class(body["L"], variety, f"{path}.L")
        U = parse_class(body.get("U", "1"), variety, f"{path}.U")
        try:
            return kind, ("general", CentralCharge(tuple(rho), U, L))
        except ValueError as exc:
            raise ConfigError([f"{path}: {exc}"]) from None
    if kind == "polynomial":
        if isinstance(body, dict) and "phase" in body:
            _expect_keys(body, path, {"phase", "omega"})
            ph = body["phase"]
            if not isinstance(ph, list) or len(ph) != 2:
                raise ConfigError([f"{path}.phase: expected [re, im]"])
            phase = GaussianRational(parse_rational(ph[0], path), parse_rational(ph[1], path))
            return kind, phase_polynomial(fan, parse_divisor(body["omega"], variety, f"{path}.omega"), phase)
        _expect_keys(body, path, {"gammas"})
        if not isinstance(body["gammas"], list):
            raise ConfigError([f"{path}.gammas: expected a list of class expressions"])
        gammas = [parse_class(g, variety, f"{path}.gammas[{j}]") for j, g in enumerate(body["gammas"])]
        try:
            return kind, PolynomialCondition(tuple(gammas))
        except ValueError as exc:
            raise ConfigError([f"{path}: {exc}"]) from None
    if kind == "alpha":
        _expect_keys(body, path, {"classes"}, {"asymptotic"})
        if not isinstance(body["classes"], list):
            raise ConfigError([f"{path}.classes: expected a list of class expressions"])
        if not isinstance(body.get("asymptotic", True), bool):
            raise ConfigError([f"{path}.asymptotic: expected a boolean"])
        classes = tuple(parse_class(c, variety, f"{path}.classes[{j}]") for j, c in enumerate(body["classes"]))
        if len(classes) != fan.rank + 1:
            raise ConfigError([f"{path}.classes: need {fan.rank + 1} classes"])
        return kind, AlphaCondition(classes, bool(body.get("asymptotic", True)))
    if kind == "slope":
        _expect_keys(body, path, {"L"})
        return kind, SlopeCondition(parse_divisor(body["L"], variety, f"{path}.L"))
    raise ConfigError([f"condition: unknown kind {kind!r}"])


def _parse_options(obj: Any, variety: Variety) -> Options:
    keys = {"strong", "mode", "delta", "grid", "epsilon", "epsilon_steps", "blowup_cone", "scan_L", "expressions"}
    _expect_keys(obj, "options", set(), keys)
    o = Options()
    if "strong" in obj:
        if not isinstance(obj["strong"], bool):
            raise ConfigError(["options.strong: expected a boolean"])
        o.strong = obj["strong"]
    if "mode" in obj:
        if obj["mode"] not in ("raw", "rank-reduced"):
            raise ConfigError(["options.mode: expected 'raw' or 'rank-reduced'"])
        o.mode = obj["mode"]
    if "delta" in obj:
        d = obj["delta"]
        if not isinstance(d, list) or len(d) != variety.fan.rank \
                or any(isinstance(x, bool) or x not in (1, -1) for x in d):
            raise ConfigError([f"options.delta: expected {variety.fan.rank} entries from {{1, -1}}"])
        o.delta = tuple(d)
    if "grid" in obj:
        o.grid = obj["grid"]
        parse_grid(o.grid)
    if "epsilon" in obj:
        o.epsilon = parse_epsilon(obj["epsilon"], variety.fan.rank)
    if "epsilon_steps" in obj:
        o.epsilon_steps = parse_int(obj["epsilon_steps"], "options.epsilon_steps", 1)
    if "blowup_cone" in obj:
        bc = obj["blowup_cone"]
        if not isinstance(bc, list):
            raise ConfigError(["options.blowup_cone: expected a list of ray indices"])
        c = tuple(sorted(parse_int(x, "options.blowup_cone") for x in bc))
        if c not in variety.fan.max_cones:
            raise ConfigError([f"options.blowup_cone: {list(c)} is not a maximal cone"])
        o.blowup_cone = c
    if "scan_L" in obj:
        if not isinstance(obj["scan_L"], str):
            raise ConfigError(["options.scan_L: expected an expression string"])
        o.scan_L = obj["scan_L"]
    if "expressions" in obj:
        if not isinstance(obj["expressions"], list):
            raise ConfigError(["options.expressions: expected a list of strings"])
        o.expressions = tuple(obj["expressions"])
        for i, e in enumerate(o.expressions):
            parse_class(e, variety, f"options.expressions[{i}]")
    return o


def parse_grid(text: Any) -> tuple[list[Fraction], list[Fraction]]:
    """'aMIN:aMAX:STEP,bMIN:bMAX:STEP' with exact rational endpoints."""
    if not isinstance(text, str) or text.count(",") != 1:
        raise ConfigError(["grid: expected 'aMIN:aMAX:STEP,bMIN:bMAX:STEP'"])
    axes = []
    for name, part in zip("ab", text.split(",")):
        bits = part.split(":")
        if len(bits) != 3:
            raise ConfigError([f"grid.{name}: expected MIN:MAX:STEP"])
        lo, hi, step = (parse_rational(b, f"grid.{name}") for b in bits)
        if step <= 0 or hi < lo:
            raise ConfigError([f"grid.{name}: need STEP > 0 and MAX >= MIN"])
        vals, v = [], lo
        while v <= hi:
            vals.append(v)
            v += step
        axes.append(vals)
    return axes[0], axes[1]


def parse_epsilon(value: Any, n: int):
    if value == "auto":
        return "auto"
    if isinstance(value, str):
        try:
            value = json.loads(value)
        except json.JSONDecodeError:
            raise ConfigError(["epsilon: expected 'auto' or a JSON list of eps vectors"]) from None
    if not isinstance(value, list) or not value:
        raise ConfigError(["epsilon: expected 'auto' or a non-empty list of eps vectors"])
    out = []
    for i, vec in enumerate(value):
        if not isinstance(vec, list) or len(vec) != n + 1:
            raise ConfigError([f"epsilon[{i}]: expected {n + 1} rationals"])
        out.append(tuple(parse_rational(x, f"epsilon[{i}]") for x in vec))
    return out


def parse_config(text: str) -> JobConfig:
    try:
        raw = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"invalid JSON: {exc}"]) from None
    _expect_keys(raw, "config", {"variety"}, {"sheaf", "condition", "options", "command"})
    variety = _parse_variety(raw["variety"])
    job = JobConfig(variety=variety, raw=raw)
    if "command" in raw:
        if raw["command"] not in COMMANDS:
            raise ConfigError([f"command: unknown command {raw['command']!r}"])
        job.command = raw["command"]
    if "sheaf" in raw:
        job.sheaf = _parse_sheaf(raw["sheaf"], variety)
    if "condition" in raw:
        job.condition = _parse_condition(raw["condition"], variety)
    job.options = _parse_options(raw.get("options", {}), variety)
    return job


# ---- execution ------------------------------------------------------------------


def _need(job: JobConfig, what: str, command: str):
    if what == "sheaf" and job.sheaf is None:
        raise ConfigError([f"{command}: config needs a 'sheaf'"])
    if what == "condition" and job.condition is None:
        raise ConfigError([f"{command}: config needs a 'condition'"])


def _charge(job: JobConfig) -> CentralCharge:
    kind, data = job.condition
    if kind != "charge":
        raise ConfigError(["condition: a central charge is required here"])
    tag, body = data
    if tag == "dhym":
        return build_dhym_charge(job.variety.fan, parse_divisor(body, job.variety, "condition.charge.L"))
    return body


def _polynomial(job: JobConfig, ch=None) -> PolynomialCondition:
    kind, data = job.condition
    if kind == "charge":
        P = charge_to_polynomial(_charge(job), job.sheaf, ch=ch)
    elif kind == "polynomial":
        P = data
    else:
        raise ConfigError([f"condition: {kind} conditions do not define a polynomial"])
    if job.options.delta:
        P = P.with_delta(job.options.delta)
    return P


def _family(job: JobConfig) -> tuple[FiltrationFamily, Any]:
    s, fan = job.sheaf, job.variety.fan
    if isinstance(s, Tangent):
        return tangent_filtration(fan), s
    if isinstance(s, Filtration):
        return s.family, s
    if isinstance(s, LineBundle) or (isinstance(s, DirectSum) and all(isinstance(p, LineBundle) for p in s.parts)):
        parts = [s] if isinstance(s, LineBundle) else list(s.parts)
        coeffs = []
        for p in parts:
            if any(c.denominator != 1 for c in p.coefficients):
                raise ConfigError(["sheaf: line bundle coefficients must be integers for a filtration"])
            coeffs.append([int(c) for c in p.coefficients])
        return direct_sum_filtration(coeffs), s
    raise ConfigError(["sheaf: stability needs a tangent, filtration, or sum of line bundles"])


def _run_positivity(job: JobConfig) -> tuple[dict, bool]:
    _need(job, "sheaf", "positivity")
    _need(job, "condition", "positivity")
    fan = job.variety.fan
    if job.condition[0] == "charge" and not job.options.delta:
        Z = _charge(job)
        rep = check_charge_positivity(fan, Z, job.sheaf, strong=job.options.strong)
        out = rep.to_dict()
        if Z.ample is not None:
            out["L_ample"] = Z.ample
        return out, rep.verdict
    rep = check_positivity(fan, _polynomial(job), job.sheaf, strong=job.options.strong)
    return rep.to_dict(), rep.verdict


def _run_stability(job: JobConfig) -> tuple[dict, bool]:
    _need(job, "sheaf", "stability")
    _need(job, "condition", "stability")
    family, spec = _family(job)
    kind, data = job.condition
    condition = data if kind in ("alpha", "slope") else _polynomial(job)
    rep = check_equivariant_stability(job.variety.fan, condition, family, mode=job.options.mode, spec=spec)
    return rep.to_dict(), rep.verdict


def _run_blowup(job: JobConfig) -> tuple[dict, bool]:
    _need(job, "sheaf", "blowup")
    _need(job, "condition", "blowup")
    fan = job.variety.fan
    cone = job.options.blowup_cone or fan.max_cones[0]
    model = bl.blowup_fixed_point(fan, cone)
    P = _polynomial(job)
    if job.options.epsilon == "auto":
        eta = bl.eta_bound(model, P, job.sheaf, strong=job.options.strong)
        conds = bl.epsilon_conditions(model, job.sheaf, P.delta)
        grid = bl.epsilon_grid(eta.eta, conds, job.options.epsilon_steps)
    else:
        grid = job.options.epsilon
    rep = bl.verify_epsilon_equivalence(model, P, job.sheaf, eps_grid=grid, strong=job.options.strong)
    out = rep.to_dict()
    out["blowup_cone"] = list(cone)
    out["new_ray"] = list(model.fan.rays[model.exceptional])
    return out, rep.ok


def _run_scan(job: JobConfig) -> tuple[dict, bool]:
    _need(job, "sheaf", "scan")
    if job.options.grid is None:
        raise ConfigError(["scan: a grid is required (options.grid or --grid)"])
    if job.options.scan_L is None:
        raise ConfigError(["scan: options.scan_L (an expression in a and b) is required"])
    a_vals, b_vals = parse_grid(job.options.grid)
    variety = job.variety

    def L_of(a, b):
        return parse_divisor(job.options.scan_L, variety, "options.scan_L", {"a": a, "b": b})

    rep = ample_scan(variety.fan, L_of, job.sheaf, a_vals, b_vals)
    return rep.to_dict(), all(p.verdict for p in rep.points)


def _run_intersect(job: JobConfig) -> tuple[dict, bool]:
    if not job.options.expressions:
        raise ConfigError(["intersect: options.expressions must list class expressions"])
    results = []
    for i, e in enumerate(job.options.expressions):
        c = parse_class(e, job.variety, f"options.expressions[{i}]")
        results.append({"expression": e, "degree": str(degree(c)), "class": c.normal_form().serialize()})
    return {"results": results}, True


def _run_chern(job: JobConfig) -> tuple[dict, bool]:
    _need(job, "sheaf", "chern")
    ch = chern_character(job.variety.fan, job.sheaf)
    return {
        "rank": sheaf_rank(job.variety.fan, job.sheaf),
        "ch": ch.serialize(),
        "ch_normal_form": ch.normal_form().serialize(),
        "top_degree": str(degree(ch)),
    }, True


_RUNNERS = {
    "positivity": _run_positivity,
    "stability": _run_stability,
    "blowup": _run_blowup,
    "scan": _run_scan,
    "intersect": _run_intersect,
    "chern": _run_chern,
}


def run(job: JobConfig, command: str) -> tuple[dict, bool]:
    """Run one command; returns (result document, verdict)."""
    if command not in _RUNNERS:
        raise ConfigError([f"unknown command {command!r}"])
    return _RUNNERS[command](job)


def build_report(job: JobConfig, command: str, timing: bool = False) -> tuple[dict, bool]:
    t0 = time.perf_counter()
    result, verdict = run(job, command)
    report = {"schema_version": SCHEMA_VERSION, "command": command, "input": job.raw, "result": result}
    if timing:
        report["timing_seconds"] = round(time.perf_counter() - t0, 6)
    return report, verdict


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="toricpos", description=__doc__.splitlines()[0])
    ap.add_argument("--config", required=True, help="path to a JSON job config")
    ap.add_argument("--command", choices=COMMANDS, help="overrides the config's 'command' field")
    ap.add_argument("--assert-positive", action="store_true", help="exit 1 if the positivity verdict is negative")
    ap.add_argument("--assert-stable", action="store_true", help="exit 1 if the stability verdict is negative")
    ap.add_argument("--grid", help="aMIN:aMAX:STEP,bMIN:bMAX:STEP for scan")
    ap.add_argument("--epsilon", help="'auto' or a JSON list of eps vectors for blowup")
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--timing", action="store_true", help="include wall-clock timing (breaks byte-identity)")
    args = ap.parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as fh:
            job = parse_config(fh.read())
        command = args.command or job.command
        if command is None:
            raise ConfigError(["no command given (use --command or a 'command' field)"])
        if args.grid:
            parse_grid(args.grid)
            job.options.grid = args.grid
        if args.epsilon:
            job.options.epsilon = parse_epsilon(args.epsilon, job.variety.fan.rank)
        report, verdict = build_report(job, command, args.timing)
    except (ConfigError, FanError, UnsupportedFanError, UnsupportedSheafError, NormalizationError,
            EnumerationLimitError, bl.MeaninglessBoundError, OSError, ValueError) as exc:
        errors = exc.errors if isinstance(exc, ConfigError) else [f"{type(exc).__name__}: {exc}"]
        print(json.dumps({"schema_version": SCHEMA_VERSION, "errors": errors}, indent=2), file=sys.stderr)
        return 2
    text = dumps(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if (args.assert_positive or args.assert_stable) and not verdict:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
