"""Builtin toric varieties with named divisor classes.

Each builtin bundles a fan, human-readable ray labels, and a dictionary of
named divisor classes (given as coefficient vectors on the rays) so configs
and tests can say ``F`` or ``H`` rather than ray indices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as cartesian

from .fan import Fan


@dataclass(frozen=True)
class Variety:
    name: str
    fan: Fan
    ray_labels: tuple[str, ...]
    classes: dict[str, tuple[int, ...]] = field(default_factory=dict, hash=False, compare=False)

    def names(self) -> dict[str, tuple[int, ...]]:
        """Every named divisor: ray labels, named classes, and K = -sum D_rho."""
        m = len(self.fan.rays)
        out = {lab: tuple(int(j == i) for j in range(m)) for i, lab in enumerate(self.ray_labels)}
        out.update(self.classes)
        out["K"] = (-1,) * m
        return out

    def divisor_coeffs(self, name: str) -> tuple[int, ...]:
        names = self.names()
        if name in names:
            return names[name]
        raise KeyError(f"unknown divisor name {name!r} on {self.name}")


def hirzebruch(r: int) -> Variety:
    """F_r with rays u0 = (0,-1), u1 = (1,0), u2 = (0,1), u3 = (-1,r).

    F = D1 ~ D3 is the fibre, H = D0 is the section with H^2 = r, and
    D2 ~ H - rF is the negative section.
    """
    fan = Fan([(0, -1), (1, 0), (0, 1), (-1, r)], [(0, 1), (1, 2), (2, 3), (3, 0)])
    return Variety(
        f"hirzebruch({r})",
        fan,
        ("D0", "D1", "D2", "D3"),
        {"F": (0, 1, 0, 0), "H": (1, 0, 0, 0)},
    )


def projective_space(n: int) -> Variety:
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)] + [tuple([-1] * n)]
    cones = [tuple(j for j in range(n + 1) if j != i) for i in range(n + 1)]
    labels = tuple(f"D{i}" for i in range(n + 1))
    return Variety(f"projective_space({n})", Fan(rays, cones), labels, {"H": (1,) + (0,) * n})


def p1_product(k: int) -> Variety:
    """(P^1)^k with rays +e_i (index 2i) and -e_i (index 2i+1); P_i is the pullback of a point of factor i."""
    rays = []
    for i in range(k):
        e = [0] * k
        e[i] = 1
        rays.append(tuple(e))
        rays.append(tuple(-x for x in e))
    cones = [tuple(2 * i + s for i, s in enumerate(choice)) for choice in cartesian((0, 1), repeat=k)]
    labels = tuple(f"D{i}" for i in range(2 * k))
    classes = {f"P{i}": tuple(int(j == 2 * i) for j in range(2 * k)) for i in range(k)}
    return Variety(f"p1_product({k})", Fan(rays, cones), labels, classes)


def p1xp1_projbundle() -> Variety:
    """The Fano 3-fold with rays u1..u6 (indices 0..5, labels D1..D6).

    u1 = (1,0,0), u2 = (0,1,0), u3 = (-1,0,0), u4 = (1,-1,0), u5 = (0,0,1),
    u6 = (1,0,-1). The primitive collections are {1,3}, {2,4}, {5,6}, so the
    eight maximal cones pick one ray from each pair.
    """
    rays = [(1, 0, 0), (0, 1, 0), (-1, 0, 0), (1, -1, 0), (0, 0, 1), (1, 0, -1)]
    cones = [c for c in cartesian((0, 2), (1, 3), (4, 5))]
    labels = tuple(f"D{i + 1}" for i in range(6))
    return Variety("p1xp1_projbundle", Fan(rays, cones), labels)


def p2_projbundle() -> Variety:
    """P(O + O(1)) over P^2: rays (-1,-1,1), e1, e2, e3, -e3 at indices 0..4.

    F = D0 is the pullback of a line, H = D4, and D3 ~ H - F.
    """
    rays = [(-1, -1, 1), (1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, -1)]
    cones = [tuple(sorted(pair + (v,))) for pair in ((0, 1), (0, 2), (1, 2)) for v in (3, 4)]
    labels = tuple(f"D{i}" for i in range(5))
    return Variety(
        "p2_projbundle", Fan(rays, cones), labels, {"F": (1, 0, 0, 0, 0), "H": (0, 0, 0, 0, 1)}
    )


BUILTINS = {
    "hirzebruch": hirzebruch,
    "projective_space": projective_space,
    "p1_product": p1_product,
    "p1xp1_projbundle": p1xp1_projbundle,
    "p2_projbundle": p2_projbundle,
}


def custom_variety(rays, max_cones, labels=None) -> Variety:
    fan = Fan(rays, max_cones)
    labels = tuple(labels) if labels else tuple(f"D{i}" for i in range(len(fan.rays)))
    if len(labels) != len(fan.rays) or len(set(labels)) != len(labels):
        raise ValueError("ray labels must be distinct, one per ray")
    return Variety("custom", fan, labels, {})
