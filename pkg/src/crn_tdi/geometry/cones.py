"""Finitely generated cones, chamber polars and membership tests."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import linprog, lsq_linear

from .linalg import Subspace, primitive
from .lp import cone_feasible_exact

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class GeneratedCone:
    """cone(generators) + span(lineality) in Q^dim."""

    dim: int
    generators: tuple[tuple, ...] = ()
    lineality: tuple[tuple, ...] = ()

    def __post_init__(self):
        for g in self.generators:
            if len(g) != self.dim:
                raise ValueError("generator dimension mismatch")
            if all(x == 0 for x in g):
                raise ValueError("zero generator")
        for v in self.lineality:
            if len(v) != self.dim:
                raise ValueError("lineality dimension mismatch")

    @classmethod
    def whole_space(cls, n: int) -> "GeneratedCone":
        return cls(n, (), tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @cached_property
    def lineality_space(self) -> Subspace:
        return Subspace.span(self.lineality, self.dim)

    def is_whole_space(self) -> bool:
        return self.lineality_space.dim == self.dim

    def as_float_matrix(self) -> np.ndarray:
        cols = [list(map(float, g)) for g in self.generators]
        cols += [list(map(float, v)) for v in self.lineality]
        cols += [[-float(x) for x in v] for v in self.lineality]
        if not cols:
            return np.zeros((self.dim, 0))
        return np.array(cols, dtype=float).T

    def to_json(self) -> dict:
        return {
            "generators": [[str(Fraction(x)) for x in g] for g in self.generators],
            "lineality": [[str(Fraction(x)) for x in v] for v in self.lineality],
        }


def chamber_polar(sign_vector: Sequence[int], normals: Sequence[Sequence]) -> GeneratedCone:
    """Polar of {x : s_h n_h.x >= 0 (s_h != 0), n_h.x = 0 (s_h = 0)}.

    By Farkas' lemma this is cone{-s_h n_h} + span{n_h : s_h = 0}.
    """
    if len(sign_vector) != len(normals):
        raise ValueError("sign vector and normal list differ in length")
    if not normals:
        raise ValueError("dimension cannot be inferred from an empty arrangement")
    n = len(normals[0])
    return polar_from_signs(sign_vector, normals, n)


def polar_from_signs(sign_vector, normals, n: int) -> GeneratedCone:
    gens = {}
    for s, nv in zip(sign_vector, normals):
        if s != 0:
            gens.setdefault(primitive([-s * x for x in nv]), None)
    zero = [nv for s, nv in zip(sign_vector, normals) if s == 0]
    lin = Subspace.span(zero, n).integer_basis() if zero else []
    return GeneratedCone(n, tuple(gens), tuple(lin))


def _is_exact(v) -> bool:
    return all(isinstance(x, (int, Fraction)) for x in v)


def nonneg_lstsq(M: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Coefficients c >= 0 approximately minimising |M c - v| (bounded least squares).

    Uses BVLS; ``scipy.optimize.nnls`` is avoided because it can return
    non-optimal coefficients for rank-deficient inputs.
    """
    if M.shape[1] == 0:
        return np.zeros(0)
    return lsq_linear(M, v, bounds=(0, np.inf), method="bvls").x


def _inf_residual_lp(M: np.ndarray, v: np.ndarray) -> float | None:
    # variables: coef (k, >=0), s (>=0); minimise s with |v - M coef| <= s
    m, k = M.shape
    c = np.zeros(k + 1)
    c[-1] = 1.0
    A = np.vstack([np.hstack([-M, -np.ones((m, 1))]), np.hstack([M, -np.ones((m, 1))])])
    b = np.concatenate([-v, v])
    res = linprog(c, A_ub=A, b_ub=b, bounds=[(0, None)] * (k + 1), method="highs")
    return float(res.x[-1]) if res.status == 0 else None


def cone_residual(v: Sequence[float], cone: GeneratedCone, tol: float = DEFAULT_TOL) -> float:
    """min over the cone of ||v - c||_inf, relative to (1 + ||v||_inf).

    A bounded least-squares fit gives a certified upper bound; when that bound
    exceeds ``tol`` the exact minimum is recomputed by a linear program.
    """
    v = np.asarray(v, dtype=float)
    scale = 1.0 + float(np.max(np.abs(v))) if v.size else 1.0
    if cone.is_whole_space():
        return 0.0
    M = cone.as_float_matrix()
    if M.shape[1] == 0:
        return float(np.max(np.abs(v), initial=0.0)) / scale
    coef = nonneg_lstsq(M, v)
    rinf = float(np.max(np.abs(v - M @ coef), initial=0.0))
    if rinf <= tol * scale:
        return rinf / scale
    lp = _inf_residual_lp(M, v)
    if lp is not None:
        rinf = min(rinf, lp)
    return rinf / scale


def cone_member(v: Sequence, cone: GeneratedCone, tol: float = DEFAULT_TOL) -> bool:
    """Is v within relative tolerance ``tol`` of the cone?

    Exact (rational simplex) when ``tol == 0`` and ``v`` is rational,
    floating point (NNLS, refined by an LP) otherwise.
    """
    if len(v) != cone.dim:
        raise ValueError(f"vector of length {len(v)} tested against cone in dimension {cone.dim}")
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    if tol == 0 and _is_exact(v):
        return cone_feasible_exact(v, cone.generators, cone.lineality)
    return cone_residual(v, cone, tol) <= tol
