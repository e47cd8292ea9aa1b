"""Euclidean distance from a point to a sign-vector region (a polyhedral cone)."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .cones import nonneg_lstsq

CONVERGENCE_TOL = 1e-12
MAX_ITER = 100_000


class DykstraNonConvergence(RuntimeError):
    def __init__(self, X, signs, iterations):
        super().__init__(f"Dykstra projection did not converge after {iterations} sweeps "
                         f"(X={list(X)}, signs={list(signs)})")
        self.X, self.signs = X, signs


def _region(signs, normals):
    N = np.array([[float(v) for v in n] for n in normals], dtype=float)
    s = np.asarray(signs, dtype=float)
    half = N[s != 0] * s[s != 0, None]
    eq = N[s == 0]
    return half, eq


def _subspace_projector(eq: np.ndarray, n: int):
    if eq.shape[0] == 0:
        return None
    # orthonormal basis of span(eq) via SVD; project onto its complement
    u, sv, vt = np.linalg.svd(eq, full_matrices=False)
    rk = int(np.sum(sv > 1e-12 * sv[0]))
    Q = vt[:rk]
    return np.eye(n) - Q.T @ Q


def _polish(X, y, half, eq):
    """Active-set refinement of an approximate projection ``y`` (KKT-checked)."""
    n = X.size
    scale = max(1.0, float(np.linalg.norm(X)))
    act = half[(half @ y) <= 1e-7 * scale] if half.shape[0] else half
    A = np.vstack([act, eq]) if act.shape[0] or eq.shape[0] else np.zeros((0, n))
    P = _subspace_projector(A, n)
    y_star = X.copy() if P is None else P @ X
    if half.shape[0] and np.min(half @ y_star) < -1e-13 * scale:
        return None
    # KKT: X - y* in cone{-a : a active} + span(eq)
    cols = [-a for a in act] + list(eq) + [-e for e in eq]
    r = X - y_star
    if cols:
        M = np.array(cols).T
        res = float(np.linalg.norm(M @ nonneg_lstsq(M, r) - r))
    else:
        res = float(np.linalg.norm(r))
    if res > 1e-10 * scale:
        return None
    return y_star


def project_to_region(X: Sequence[float], signs: Sequence[int], normals: Sequence[Sequence],
                      tol: float = CONVERGENCE_TOL, max_iter: int = MAX_ITER) -> np.ndarray:
    """Closest point of the region to X, by Dykstra's cyclic projections."""
    X = np.asarray(X, dtype=float)
    n = X.size
    if not normals:
        return X.copy()
    half, eq = _region(signs, normals)
    if (half.shape[0] == 0 or np.all(half @ X >= 0)) and (eq.shape[0] == 0 or np.all(eq @ X == 0)):
        return X.copy()
    P_eq = _subspace_projector(eq, n)
    sq = np.einsum("ij,ij->i", half, half)
    x = X.copy()
    incr = np.zeros_like(half)
    scale = max(1.0, float(np.linalg.norm(X)))
    for it in range(max_iter):
        x_old = x.copy()
        if P_eq is not None:
            x = P_eq @ x
        for i in range(half.shape[0]):
            z = x + incr[i]
            t = half[i] @ z
            y = z if t >= 0 else z - (t / sq[i]) * half[i]
            incr[i] = z - y
            x = y
        if np.linalg.norm(x - x_old) <= tol * scale:
            break
    else:
        raise DykstraNonConvergence(X, signs, max_iter)
    if P_eq is not None:
        x = P_eq @ x
    polished = _polish(X, x, half, eq)
    return x if polished is None else polished


def distance_to_region(X: Sequence[float], signs: Sequence[int], normals: Sequence[Sequence],
                       tol: float = CONVERGENCE_TOL, max_iter: int = MAX_ITER) -> float:
    """Euclidean distance from X to the closed region of a sign vector.

    Exactly 0.0 when X already satisfies every constraint.
    """
    X = np.asarray(X, dtype=float)
    y = project_to_region(X, signs, normals, tol, max_iter)
    return float(np.linalg.norm(X - y))
