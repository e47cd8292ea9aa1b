"""Hyperplane-generated polyhedral fans built from source-vertex differences."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .geometry.arrangement import (Face, arrangement_rays, enumerate_faces, merge_signs,
                                   sign_vector)
from .geometry.distance import distance_to_region
from .geometry.linalg import Subspace, canonical_normal, sub


class DegenerateSources(ValueError):
    """The source differences span only the zero subspace."""


@dataclass(frozen=True)
class Ray:
    direction: tuple[int, ...]

    @cached_property
    def unit(self) -> np.ndarray:
        d = np.array(self.direction, dtype=float)
        return d / np.linalg.norm(d)


@dataclass(frozen=True, eq=False)
class Fan:
    """Complete fan whose maximal cones are the chambers of a central arrangement.

    ``normals`` are primitive, sign-canonical and sorted; a chamber is a strict
    sign vector over them. ``J`` is the span of the normals and ``lineality``
    its orthogonal complement (contained in every cone).
    """

    dim: int
    normals: tuple[tuple[int, ...], ...]
    J: Subspace
    lineality: Subspace

    @classmethod
    def from_normals(cls, normals: Iterable[Sequence], dim: int) -> "Fan":
        canon = sorted({canonical_normal(n) for n in normals if any(x != 0 for x in n)})
        J = Subspace.span(canon, dim)
        return cls(dim, tuple(canon), J, J.orthogonal_complement())

    @cached_property
    def faces(self) -> list[Face]:
        return enumerate_faces(self.normals, self.dim)

    @cached_property
    def chambers(self) -> list[tuple[int, ...]]:
        return [f.signs for f in enumerate_faces(self.normals, self.dim, full_only=True)]

    @cached_property
    def rays(self) -> list[Ray]:
        return fan_rays(self)

    @cached_property
    def float_normals(self) -> np.ndarray:
        return np.array(self.normals, dtype=float).reshape(len(self.normals), self.dim)

    def chamber_of(self, x: Sequence) -> tuple[int, ...]:
        return sign_vector(self.normals, x)

    def contains(self, signs: Sequence[int], x: Sequence) -> bool:
        """Exact test that x lies in the closed region of ``signs``."""
        sv = sign_vector(self.normals, x)
        return all(s == 0 and t == 0 or s != 0 and t in (0, s) for s, t in zip(signs, sv))

    def summary(self) -> dict:
        return {
            "dim": self.dim,
            "normals": [list(n) for n in self.normals],
            "n_chambers": len(self.chambers),
            "rays": [list(r.direction) for r in self.rays] if self.J.dim else [],
            "dim_J": self.J.dim,
        }


def build_fan(sources: Iterable[Sequence]) -> Fan:
    """Fan generated by the hyperplanes orthogonal to s_i - s_j over distinct sources."""
    pts = sorted(set(tuple(s) for s in sources))
    if not pts:
        raise ValueError("at least one source vertex is required")
    dim = len(pts[0])
    diffs = [sub(a, b) for a, b in combinations(pts, 2)]
    return Fan.from_normals(diffs, dim)


def fan_rays(fan: Fan) -> list[Ray]:
    """One-dimensional cones of the fan restricted to J, both orientations."""
    if fan.J.dim == 0:
        raise DegenerateSources("source differences span {0}; the fan has no rays")
    return [Ray(d) for d in sorted(arrangement_rays(fan.normals, fan.dim))]


def cones_within(fan: Fan, X: Sequence[float], delta: float):
    """Chambers within distance ``delta`` of X and the sign vector of their intersection."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    if not fan.normals:
        return [()], ()
    qualifying = [c for c in fan.chambers
                  if distance_to_region(X, c, fan.normals) <= delta]
    if not qualifying:
        raise RuntimeError("no chamber within delta of X; the fan is not complete")
    return qualifying, merge_signs(qualifying)


def intersection_signs(fan: Fan, X: Sequence[float], delta: float) -> tuple[int, ...]:
    """Sign vector of P = intersection of the chambers within ``delta`` of X.

    A chamber meets the closed ball B(X, delta) on both sides of a hyperplane
    exactly when the hyperplane itself meets the ball, so P keeps the sign of
    X for hyperplanes farther than ``delta`` and forces equality for the rest.
    Agrees with :func:`cones_within` without enumerating chambers.
    """
    if not fan.normals:
        return ()
    X = np.asarray(X, dtype=float)
    N = fan.float_normals
    proj = (N @ X) / np.linalg.norm(N, axis=1)
    return tuple(int(np.sign(p)) if abs(p) > delta else 0 for p in proj)
