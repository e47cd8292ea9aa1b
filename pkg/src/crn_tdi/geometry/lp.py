"""Exact rational simplex (two-phase, Bland's rule) and LP-based predicates."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import dot

_ZERO = Fraction(0)
_ONE = Fraction(1)


class _Infeasible:
    """Sentinel returned by :func:`lp_relative_interior` for empty regions."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Infeasible"

    def __bool__(self) -> bool:
        return False


Infeasible = _Infeasible()


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None


class _Tableau:
    def __init__(self, rows, rhs, basis):
        self.T = rows
        self.rhs = rhs
        self.basis = basis
        self.obj: list[Fraction] = []
        self.val = _ZERO

    def set_objective(self, c):
        n = len(self.T[0]) if self.T else len(c)
        obj = list(c) + [_ZERO] * (n - len(c))
        val = _ZERO
        for row, b, rhs in zip(self.T, self.basis, self.rhs):
            cb = obj[b] if b < len(c) else _ZERO
            if cb:
                obj = [o - cb * t for o, t in zip(obj, row)]
                val += cb * rhs
        self.obj, self.val = obj, val

    def pivot(self, r, c):
        T, rhs = self.T, self.rhs
        pr = T[r][c]
        if pr != 1:
            T[r] = [x / pr for x in T[r]]
            rhs[r] = rhs[r] / pr
        prow, pb = T[r], rhs[r]
        for i, row in enumerate(T):
            if i == r:
                continue
            f = row[c]
            if f:
                T[i] = [x - f * y if y else x for x, y in zip(row, prow)]
                rhs[i] = rhs[i] - f * pb
        f = self.obj[c]
        if f:
            self.obj = [x - f * y if y else x for x, y in zip(self.obj, prow)]
            self.val += f * pb
        self.basis[r] = c

    def run(self, allowed: int) -> str:
        """Maximise the current objective over columns < ``allowed``."""
        while True:
            enter = next((j for j in range(allowed) if self.obj[j] > 0), None)
            if enter is None:
                return "optimal"
            best = None
            for i, row in enumerate(self.T):
                a = row[enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], enter)


def linprog_exact(c, A_ub=(), b_ub=(), A_eq=(), b_eq=()) -> LPResult:
    """Maximise ``c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``.

    All data are converted to ``Fraction``; the result is exact.
    """
    nv = len(c)
    c = [Fraction(v) for v in c]
    m_ub, m_eq = len(A_ub), len(A_eq)
    n_slack = m_ub
    rows, rhs, needs_art = [], [], []
    for i, (a, b) in enumerate(zip(A_ub, b_ub)):
        row = [Fraction(v) for v in a] + [_ZERO] * n_slack
        row[nv + i] = _ONE
        b = Fraction(b)
        if b < 0:
            row = [-v for v in row]
            b = -b
            needs_art.append(True)
        else:
            needs_art.append(False)
        rows.append(row)
        rhs.append(b)
    for a, b in zip(A_eq, b_eq):
        row = [Fraction(v) for v in a] + [_ZERO] * n_slack
        b = Fraction(b)
        if b < 0:
            row = [-v for v in row]
            b = -b
        rows.append(row)
        rhs.append(b)
        needs_art.append(True)

    n_real = nv + n_slack
    art_rows = [i for i, need in enumerate(needs_art) if need]
    n_art = len(art_rows)
    basis = []
    for i, row in enumerate(rows):
        row.extend([_ZERO] * n_art)
    for k, i in enumerate(art_rows):
        rows[i][n_real + k] = _ONE
    art_of = {i: n_real + k for k, i in enumerate(art_rows)}
    for i in range(len(rows)):
        basis.append(art_of[i] if i in art_of else nv + i)

    if not rows:
        if any(v > 0 for v in c):
            return LPResult("unbounded")
        return LPResult("optimal", tuple([_ZERO] * nv), _ZERO)

    tab = _Tableau(rows, rhs, basis)
    if n_art:
        tab.set_objective([_ZERO] * n_real + [-_ONE] * n_art)
        tab.run(n_real + n_art)
        if tab.val < 0:
            return LPResult("infeasible")
        # drive zero-level artificials out of the basis; drop redundant rows
        i = 0
        while i < len(tab.T):
            if tab.basis[i] >= n_real:
                col = next((j for j in range(n_real) if tab.T[i][j] != 0), None)
                if col is None:
                    del tab.T[i], tab.rhs[i], tab.basis[i]
                    continue
                tab.pivot(i, col)
            i += 1
        if not tab.T:
            if any(v > 0 for v in c):
                return LPResult("unbounded")
            return LPResult("optimal", tuple([_ZERO] * nv), _ZERO)

    tab.set_objective(c)
    status = tab.run(n_real)
    if status == "unbounded":
        return LPResult("unbounded")
    x = [_ZERO] * nv
    for b, v in zip(tab.basis, tab.rhs):
        if b < nv:
            x[b] = v
    return LPResult("optimal", tuple(x), tab.val)


def lp_relative_interior(equalities: Sequence[Sequence], strict: Sequence[Sequence],
                         nonstrict: Sequence[Sequence] = (), dim: int | None = None):
    """Exact point x with b.x = 0, a.x > 0 (strict), c.x >= 0 (nonstrict).

    Maximises an auxiliary slack t with a.x >= t and ||x||_inf <= 1. Returns
    :data:`Infeasible` when the optimum has t <= 0. With no strict rows the
    origin is returned whenever the (always feasible) homogeneous system is
    consistent.
    """
    vecs = list(equalities) + list(strict) + list(nonstrict)
    if dim is None:
        if not vecs:
            raise ValueError("dimension cannot be inferred from empty constraints")
        dim = len(vecs[0])
    if any(len(v) != dim for v in vecs):
        raise ValueError("constraint vectors differ in dimension")
    if not strict:
        return tuple([_ZERO] * dim)
    n = dim
    # columns: p (n), q (n), t ; x = p - q
    A, b = [], []
    for a in strict:
        a = [Fraction(v) for v in a]
        A.append([-v for v in a] + a + [_ONE])
        b.append(_ZERO)
    for a in nonstrict:
        a = [Fraction(v) for v in a]
        A.append([-v for v in a] + a + [_ZERO])
        b.append(_ZERO)
    for a in equalities:
        a = [Fraction(v) for v in a]
        A.append(a + [-v for v in a] + [_ZERO])
        A.append([-v for v in a] + a + [_ZERO])
        b.extend([_ZERO, _ZERO])
    for i in range(2 * n + 1):
        row = [_ZERO] * (2 * n + 1)
        row[i] = _ONE
        A.append(row)
        b.append(_ONE)
    c = [_ZERO] * (2 * n) + [_ONE]
    res = linprog_exact(c, A, b)
    if res.status != "optimal" or res.value <= 0:
        return Infeasible
    x = tuple(res.x[i] - res.x[n + i] for i in range(n))
    # the LP optimum is a vertex; nudge nothing, but confirm exactly
    assert all(dot(a, x) > 0 for a in strict)
    return x


def cone_feasible_exact(v: Sequence, generators: Sequence[Sequence],
                        lineality: Sequence[Sequence]) -> bool:
    """Exact test of v in cone(generators) + span(lineality)."""
    n = len(v)
    cols = [list(g) for g in generators] + [list(l) for l in lineality] + \
        [[-x for x in l] for l in lineality]
    if not cols:
        return all(Fraction(x) == 0 for x in v)
    A_eq = [[Fraction(col[i]) for col in cols] for i in range(n)]
    res = linprog_exact([0] * len(cols), A_eq=A_eq, b_eq=list(v))
    return res.status == "optimal"
