"""Exact rational linear algebra: row reduction, kernels, and subspaces of Q^r.

Row reduction is delegated to sympy's DomainMatrix over QQ; everything that
leaves this module is a plain ``fractions.Fraction``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Vector = tuple[Fraction, ...]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    # gmpy2.mpq / PythonMPQ / sympy Rational all expose numerator/denominator
    return Fraction(int(x.numerator), int(x.denominator))


def _domain(rows: Sequence[Sequence], ncols: int) -> DomainMatrix:
    data = [[QQ(int(Fraction(v).numerator), int(Fraction(v).denominator)) for v in row] for row in rows]
    return DomainMatrix(data, (len(data), ncols), QQ)


def _to_rows(M: DomainMatrix) -> list[Vector]:
    return [tuple(as_fraction(v) for v in row) for row in M.to_list()]


def rref(rows: Sequence[Sequence], ncols: int) -> tuple[list[Vector], tuple[int, ...]]:
    """Reduced row-echelon form; zero rows dropped. Returns (rows, pivot columns)."""
    if not rows:
        return [], ()
    R, pivots = _domain(rows, ncols).rref()
    out = _to_rows(R)[: len(pivots)]
    return out, tuple(pivots)


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Basis of {x : A x = 0} for A given by ``rows``."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    N = _domain(rows, ncols).nullspace()
    if N.shape[0] == 0:
        return []
    return _to_rows(N)


def inverse(rows: Sequence[Sequence]) -> list[Vector]:
    n = len(rows)
    return _to_rows(_domain(rows, n).inv())


def determinant(rows: Sequence[Sequence]) -> Fraction:
    n = len(rows)
    return as_fraction(_domain(rows, n).det())


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), 0)


class RowSpace:
    """Row space of a rational matrix, kept in RREF for membership tests and reduction.

    ``reduce`` eliminates the pivot columns of a vector, so the result is
    supported on the free columns; a vector lies in the row space iff its
    reduction vanishes.
    """

    def __init__(self, rows: Sequence[Sequence], ncols: int):
        self.ncols = ncols
        self.rows, self.pivots = rref(rows, ncols)
        self.free = tuple(j for j in range(ncols) if j not in set(self.pivots))

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, v: Sequence[Fraction]) -> list[Fraction]:
        w = list(v)
        for row, p in zip(self.rows, self.pivots):
            c = w[p]
            if c:
                for j in range(p, self.ncols):
                    if row[j]:
                        w[j] -= c * row[j]
        return w

    def contains(self, v: Sequence[Fraction]) -> bool:
        return not any(self.reduce(v))


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of Q^ambient, canonically stored by its RREF basis."""

    ambient: int
    basis: tuple[Vector, ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient: int) -> "Subspace":
        rows = [tuple(Fraction(x) for x in v) for v in vectors]
        for r in rows:
            if len(r) != ambient:
                raise ValueError(f"vector {r} does not live in Q^{ambient}")
        reduced, _ = rref(rows, ambient)
        return cls(ambient, tuple(reduced))

    @classmethod
    def full(cls, ambient: int) -> "Subspace":
        return cls.span([[int(i == j) for j in range(ambient)] for i in range(ambient)], ambient)

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls(ambient, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.basis + other.basis, self.ambient)

    def __and__(self, other: "Subspace") -> "Subspace":
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient)
        # x.B_self = y.B_other  <=>  (x, y) in left kernel of [B_self; B_other]
        stacked = list(self.basis) + [tuple(-v for v in r) for r in other.basis]
        columns = [[row[j] for row in stacked] for j in range(self.ambient)]
        kernel = nullspace(columns, len(stacked))
        vecs = []
        for coeffs in kernel:
            x = coeffs[: self.dim]
            vecs.append(tuple(sum((c * b[j] for c, b in zip(x, self.basis)), Fraction(0)) for j in range(self.ambient)))
        return Subspace.span(vecs, self.ambient)

    def contains_vector(self, v: Sequence) -> bool:
        return Subspace.span(self.basis + (tuple(Fraction(x) for x in v),), self.ambient).dim == self.dim

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains_vector(b) for b in self.basis)

    def __lt__(self, other: "Subspace") -> bool:
        return self <= other and self.dim < other.dim

    def complement_in(self, larger: "Subspace") -> list[Vector]:
        """Vectors from ``larger``'s basis extending a basis of ``self`` to one of ``larger``."""
        current = self
        extra = []
        for b in larger.basis:
            if not current.contains_vector(b):
                extra.append(b)
                current = Subspace.span(current.basis + (b,), self.ambient)
        return extra

    def __repr__(self) -> str:
        rows = ", ".join("(" + ", ".join(str(x) for x in r) + ")" for r in self.basis)
        return f"Subspace<{self.dim} in Q^{self.ambient}: {rows}>"
