"""Exact decision of endotacticity, with witness directions on failure."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .egraph import EGraph
from .geometry.arrangement import enumerate_faces
from .geometry.linalg import Subspace, canonical_normal, dot, primitive, sub
from .geometry.lp import Infeasible, cone_feasible_exact, lp_relative_interior


@dataclass(frozen=True)
class DirectionVerdict:
    ok: bool
    violating_edge: int | None
    direction: tuple

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "violating_edge": self.violating_edge,
            "direction": [str(Fraction(x)) for x in self.direction],
        }


@dataclass(frozen=True)
class EndotacticResult:
    endotactic: bool
    witness: DirectionVerdict | None = None

    def __bool__(self) -> bool:
        return self.endotactic

    def to_json(self, G: EGraph | None = None) -> dict:
        out = {"endotactic": self.endotactic}
        if self.witness is not None:
            out["witness_direction"] = [str(Fraction(x)) for x in self.witness.direction]
            out["violating_edge"] = self.witness.violating_edge
            if G is not None:
                s, t = G.edge_coords()[self.witness.violating_edge]
                out["violating_edge_coords"] = [[str(c) for c in s], [str(c) for c in t]]
        return out


def check_direction(G: EGraph, w: Sequence) -> DirectionVerdict:
    """Endotactic condition for the single direction ``w`` (exact).

    Fails when the lowest source (in w-projection) of an edge pointing
    against w is not strictly undercut by the source of an edge pointing
    along w.
    """
    if len(w) != G.dim:
        raise ValueError(f"direction has {len(w)} coordinates, graph has {G.dim}")
    w = tuple(w)
    levels = [dot(w, G.vertices[s]) for s, _ in G.edges]
    slopes = [dot(w, e) for e in G.edge_vectors]
    bad = [i for i, d in enumerate(slopes) if d < 0]
    if not bad:
        return DirectionVerdict(True, None, w)
    m = min(levels[i] for i in bad)
    if any(d > 0 and lv < m for d, lv in zip(slopes, levels)):
        return DirectionVerdict(True, None, w)
    first = next(i for i in bad if levels[i] == m)
    return DirectionVerdict(False, first, w)


def _edge_flats(directions: list[tuple[int, ...]], dim: int) -> list[frozenset[int]]:
    """All flats (span-closed subsets) of the edge-direction matroid."""

    def closure(idx: frozenset[int]) -> frozenset[int]:
        if not idx:
            return frozenset()
        span = Subspace.span([directions[i] for i in idx], dim)
        return frozenset(i for i, d in enumerate(directions) if span.contains(d))

    start = closure(frozenset())
    flats = {start}
    todo = [start]
    while todo:
        F = todo.pop()
        for d in range(len(directions)):
            if d in F:
                continue
            G = closure(F | {d})
            if G not in flats:
                flats.add(G)
                todo.append(G)
    return sorted(flats, key=lambda F: (len(F), sorted(F)))


def _witness_by_flats(G: EGraph):
    """First failing direction, or None if G is endotactic.

    A direction w fails iff for some edge i and the set Z of edges with
    w.e = 0 (a flat), w.e_i < 0 and w.(s_j - s_i) >= 0 for every edge j
    outside Z. For a fixed (Z, i) this is a linear system, infeasible exactly
    when e_i lies in cone{s_j - s_i} + span(Z) (Motzkin).
    """
    V = G.int_vertices
    src = [V[s] for s, _ in G.edges]
    evec = [sub(V[t], V[s]) for s, t in G.edges]
    dirs: dict[tuple, int] = {}
    edge_dir = []
    for e in evec:
        edge_dir.append(dirs.setdefault(canonical_normal(e), len(dirs)))
    directions = list(dirs)
    for Z in _edge_flats(directions, G.dim):
        eq = Subspace.span([directions[z] for z in Z], G.dim).integer_basis() if Z else []
        done = set()
        for i in range(len(evec)):
            if edge_dir[i] in Z:
                continue
            key = (src[i], primitive(evec[i]))
            if key in done:
                continue
            done.add(key)
            lower = {}
            for j in range(len(evec)):
                if edge_dir[j] not in Z and src[j] != src[i]:
                    lower.setdefault(primitive(sub(src[j], src[i])), None)
            if cone_feasible_exact(evec[i], list(lower), eq):
                continue
            w = lp_relative_interior(eq, [tuple(-x for x in evec[i])], list(lower), dim=G.dim)
            assert w is not Infeasible
            return primitive(w)
    return None


def _witness_by_faces(G: EGraph, method: str = "cocircuit"):
    V = G.int_vertices
    normals = {canonical_normal(sub(V[t], V[s])) for s, t in G.edges}
    srcs = sorted({V[s] for s, _ in G.edges})
    normals |= {canonical_normal(sub(a, b)) for a, b in combinations(srcs, 2)}
    for face in enumerate_faces(sorted(normals), G.dim, method=method):
        if not any(face.point):
            continue
        if not check_direction(G, face.point).ok:
            return face.point
    return None


def is_endotactic(G: EGraph, method: str = "flats") -> EndotacticResult:
    """Exact endotacticity decision.

    ``method="flats"`` searches over flats of the edge-direction matroid with
    one small LP per (flat, edge); ``"faces"`` (and ``"faces-lp"``) evaluate
    :func:`check_direction` on a relative-interior point of every face of the
    arrangement cut out by edge vectors and source differences.
    """
    if not G.edges:
        return EndotacticResult(True)
    if method == "flats":
        w = _witness_by_flats(G)
    elif method == "faces":
        w = _witness_by_faces(G)
    elif method == "faces-lp":
        w = _witness_by_faces(G, method="lp")
    else:
        raise ValueError(f"unknown method {method!r}")
    if w is None:
        return EndotacticResult(True)
    verdict = check_direction(G, tuple(Fraction(x) for x in w))
    assert not verdict.ok
    return EndotacticResult(False, verdict)
