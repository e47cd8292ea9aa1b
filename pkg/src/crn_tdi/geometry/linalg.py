"""Exact rational linear algebra on small dense matrices.

Vectors are tuples of ``Fraction`` (or ``int``); nothing here touches floats.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

Vector = tuple  # tuple of Fraction | int


def as_fractions(v: Iterable) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def sign(x) -> int:
    return (x > 0) - (x < 0)


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def rref(rows: Iterable[Sequence], ncols: int | None = None):
    """Row-reduce ``rows``; returns (nonzero reduced rows, pivot columns)."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        if piv != 1:
            m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def rank(rows: Iterable[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of {x : r.x = 0 for r in rows}, one vector per free column."""
    reduced, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def primitive(v: Sequence) -> tuple[int, ...]:
    """Smallest integer vector with the same direction (sign preserved)."""
    fr = as_fractions(v)
    den = reduce(lcm, (x.denominator for x in fr), 1)
    ints = [int(x * den) for x in fr]
    g = reduce(gcd, (abs(x) for x in ints), 0)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def canonical_normal(v: Sequence) -> tuple[int, ...]:
    """Primitive integer vector with first nonzero coordinate positive."""
    p = primitive(v)
    lead = next((x for x in p if x != 0), 0)
    return tuple(-x for x in p) if lead < 0 else p


@dataclass(frozen=True)
class Subspace:
    """Linear subspace of Q^n stored as a row-reduced basis."""

    dim_ambient: int
    basis: tuple[tuple[Fraction, ...], ...]
    pivots: tuple[int, ...] = ()

    @classmethod
    def span(cls, vectors: Iterable[Sequence], n: int) -> "Subspace":
        reduced, pivots = rref([v for v in vectors], n)
        return cls(n, tuple(reduced), tuple(pivots))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls.span([[int(i == j) for j in range(n)] for i in range(n)], n)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        r = list(map(Fraction, v))
        for row, p in zip(self.basis, self.pivots):
            if r[p] != 0:
                f = r[p]
                r = [x - f * y for x, y in zip(r, row)]
        return all(x == 0 for x in r)

    def orthogonal_complement(self) -> "Subspace":
        if not self.basis:
            return Subspace.full(self.dim_ambient)
        return Subspace.span(nullspace(self.basis, self.dim_ambient), self.dim_ambient)

    def integer_basis(self) -> list[tuple[int, ...]]:
        return [primitive(b) for b in self.basis]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.dim_ambient == other.dim_ambient and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.dim_ambient, self.basis))


def span_of(differences: Iterable[Sequence], n: int) -> Subspace:
    """Exact row-reduced basis of the span of ``differences``."""
    return Subspace.span(differences, n)
