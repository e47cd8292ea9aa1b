"""Faces of central hyperplane arrangements, as sign vectors.

Two enumeration routes are provided and are kept independent so that one can
serve as an oracle for the other:

* ``cocircuit``: rays (1-dimensional faces modulo the lineality space) are
  computed from rank-deficient subsets of normals; every other face is a
  composition of rays, and the sum of the rays in a face's closure is a
  relative-interior point of it.
* ``lp``: signs are fixed one hyperplane at a time and infeasible prefixes
  are pruned with :func:`lp_relative_interior`.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .linalg import dot, nullspace, primitive, rank, sign
from .lp import Infeasible, lp_relative_interior

SignVector = tuple  # entries in {-1, 0, 1}


@dataclass(frozen=True)
class Face:
    signs: SignVector
    point: tuple[int, ...]  # exact relative-interior representative

    @property
    def zeros(self) -> int:
        return sum(1 for s in self.signs if s == 0)


def sign_vector(normals: Sequence[Sequence], x: Sequence) -> SignVector:
    return tuple(sign(dot(n, x)) for n in normals)


def region_constraints(signs: SignVector, normals: Sequence[Sequence]):
    """(equalities, halfspaces) describing the closed region of a sign vector."""
    eqs = [tuple(n) for s, n in zip(signs, normals) if s == 0]
    half = [tuple(s * v for v in n) for s, n in zip(signs, normals) if s != 0]
    return eqs, half


def region_is_face(signs: SignVector, normals: Sequence[Sequence], dim: int):
    """Exact relative-interior point of the face with these signs, or Infeasible."""
    eqs, half = region_constraints(signs, normals)
    return lp_relative_interior(eqs, half, dim=dim)


def arrangement_rays(normals: Sequence[Sequence[int]], dim: int) -> list[tuple[int, ...]]:
    """Primitive directions of all 1-dimensional faces, both orientations.

    Directions are taken inside the row space of ``normals`` (the lineality
    space of the arrangement is factored out). Empty when ``normals`` span
    nothing.
    """
    normals = [tuple(n) for n in normals]
    r = rank(normals) if normals else 0
    if r == 0:
        return []
    lin = [primitive(v) for v in nullspace(normals, dim)]
    seen: dict[tuple, None] = {}
    for subset in combinations(range(len(normals)), r - 1):
        rows = [normals[i] for i in subset] + lin
        ns = nullspace(rows, dim)
        if len(ns) != 1:
            continue
        d = primitive(ns[0])
        seen.setdefault(d, None)
        seen.setdefault(tuple(-x for x in d), None)
    return list(seen)


def _int_matrix(vectors, dim):
    return np.array(vectors, dtype=object).reshape(len(vectors), dim)


def _unique_rows(rows: np.ndarray) -> np.ndarray:
    k = rows.shape[1]
    if k > 32:
        _, idx = np.unique(rows, axis=0, return_index=True)
        return rows[np.sort(idx)]
    weights = np.left_shift(np.uint64(1), np.arange(0, 2 * k, 2, dtype=np.uint64))
    keys = ((rows + 1).astype(np.uint64) * weights).sum(axis=1)
    _, idx = np.unique(keys, return_index=True)
    return rows[np.sort(idx)]


def enumerate_faces_cocircuit(normals: Sequence[Sequence[int]], dim: int,
                              full_only: bool = False) -> list[Face]:
    normals = [tuple(int(v) for v in n) for n in normals]
    k = len(normals)
    if k == 0:
        return [Face((), tuple([0] * dim))]
    rays = arrangement_rays(normals, dim)
    R = _int_matrix(rays, dim)
    C = np.array([[sign(dot(r, n)) for n in normals] for r in rays],
                 dtype=np.int8).reshape(len(rays), k)

    known = {bytes(row.tobytes()) for row in C}
    faces = [row for row in C]
    frontier = C
    while len(frontier):
        comp = np.where(frontier[:, None, :] != 0, frontier[:, None, :], C[None, :, :])
        comp = _unique_rows(comp.reshape(-1, k))
        new = []
        for row in comp:
            key = row.tobytes()
            if key not in known:
                known.add(key)
                new.append(row)
        faces.extend(new)
        frontier = np.array(new, dtype=np.int8).reshape(-1, k)

    F = np.array(faces, dtype=np.int8).reshape(-1, k)
    if full_only:
        F = F[np.all(F != 0, axis=1)]
    # rays conformal to each face: entries either zero or equal to the face's
    conf = np.all((C[None, :, :] == 0) | (C[None, :, :] == F[:, None, :]), axis=2)
    pts = conf.astype(object) @ R if len(rays) else np.zeros((len(F), dim), dtype=object)
    out = [Face(tuple(int(s) for s in row), tuple(int(v) for v in p))
           for row, p in zip(F, pts)]
    if not full_only:
        out.append(Face(tuple([0] * k), tuple([0] * dim)))
    out.sort(key=lambda f: (-f.zeros, f.signs))
    return out


def enumerate_faces_lp(normals: Sequence[Sequence[int]], dim: int,
                       full_only: bool = False) -> list[Face]:
    """Incremental sign extension with exact LP pruning."""
    normals = [tuple(n) for n in normals]
    options = (1, -1) if full_only else (1, 0, -1)
    prefixes: list[tuple] = [()]
    for i in range(len(normals)):
        nxt = []
        for p in prefixes:
            for s in options:
                cand = p + (s,)
                if region_is_face(cand, normals[: i + 1], dim) is not Infeasible:
                    nxt.append(cand)
        prefixes = nxt
    out = []
    for p in prefixes:
        x = region_is_face(p, normals, dim)
        out.append(Face(p, primitive(x) if any(x) else tuple([0] * dim)))
    out.sort(key=lambda f: (-f.zeros, f.signs))
    return out


def enumerate_faces(normals: Sequence[Sequence[int]], dim: int, full_only: bool = False,
                    method: str = "cocircuit") -> list[Face]:
    """All faces (or only chambers) of the central arrangement with these normals.

    Faces are ordered by decreasing number of zero entries, then by sign
    vector, which gives a canonical order.
    """
    if method == "cocircuit":
        return enumerate_faces_cocircuit(normals, dim, full_only)
    if method == "lp":
        return enumerate_faces_lp(normals, dim, full_only)
    raise ValueError(f"unknown face enumeration method {method!r}")


def merge_signs(sign_vectors: Iterable[SignVector]) -> SignVector:
    """Entry-wise agreement: the common sign where all agree, 0 otherwise."""
    it = iter(sign_vectors)
    try:
        merged = list(next(it))
    except StopIteration:
        raise ValueError("no sign vectors to merge") from None
    for sv in it:
        for h, s in enumerate(sv):
            if merged[h] != s:
                merged[h] = 0
    return tuple(merged)


def region_contains(outer: SignVector, inner: SignVector, normals: Sequence[Sequence],
                    dim: int) -> bool:
    """Exact test that region(inner) is a subset of region(outer)."""
    eqs, half = region_constraints(inner, normals)
    for s, n in zip(outer, normals):
        if s != 0:
            cuts = [tuple(-s * v for v in n)]
        else:
            cuts = [tuple(n), tuple(-v for v in n)]
        for c in cuts:
            if lp_relative_interior(eqs, [c], half, dim=dim) is not Infeasible:
                return False
    return True
