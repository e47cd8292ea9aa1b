"""Euclidean embedded graphs (E-graphs): reaction networks with vertices in Q^n."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import lcm
from typing import Iterable, Sequence

from .geometry.linalg import Subspace, sub

Vertex = tuple  # tuple[Fraction, ...]


class GraphError(ValueError):
    """Invalid E-graph construction."""


def _vertex(coords: Iterable) -> Vertex:
    try:
        v = tuple(Fraction(c) for c in coords)
    except (TypeError, ValueError) as exc:
        raise GraphError(f"non-rational coordinate in {coords!r}") from exc
    return v


@dataclass(frozen=True, eq=False)
class EGraph:
    """Finite directed graph whose vertices are points of Q^n.

    Vertices are deduplicated by coordinates. Edges are (source, target) index
    pairs; zero edge vectors and parallel duplicates are rejected.
    """

    dim: int
    vertices: tuple[Vertex, ...] = ()
    edges: tuple[tuple[int, int], ...] = ()
    species: tuple[str, ...] | None = None
    labels: tuple[str | None, ...] | None = None

    def __post_init__(self):
        if self.dim < 1:
            raise GraphError("dimension must be at least 1")
        verts = tuple(_vertex(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if any(len(v) != self.dim for v in verts):
            raise GraphError(f"vertex dimension differs from {self.dim}")
        if len(set(verts)) != len(verts):
            raise GraphError("duplicate vertex coordinates")
        seen = set()
        for s, t in self.edges:
            if not (0 <= s < len(verts) and 0 <= t < len(verts)):
                raise GraphError(f"edge ({s}, {t}) references a missing vertex")
            if s == t:
                raise GraphError(f"zero edge vector at vertex {verts[s]}")
            if (s, t) in seen:
                raise GraphError(f"duplicate edge {verts[s]} -> {verts[t]}")
            seen.add((s, t))
        object.__setattr__(self, "edges", tuple((int(s), int(t)) for s, t in self.edges))
        if self.species is not None:
            sp = tuple(self.species)
            if len(sp) != self.dim or len(set(sp)) != len(sp):
                raise GraphError("species names must be unique, one per coordinate")
            object.__setattr__(self, "species", sp)
        if self.labels is not None and len(self.labels) != len(verts):
            raise GraphError("one label per vertex expected")

    @classmethod
    def from_edges(cls, pairs: Iterable[tuple[Sequence, Sequence]], dim: int | None = None,
                   species: Sequence[str] | None = None,
                   extra_vertices: Iterable[Sequence] = ()) -> "EGraph":
        """Build from (source coords, target coords) pairs."""
        index: dict[Vertex, int] = {}
        edges = []
        for src, tgt in pairs:
            s, t = _vertex(src), _vertex(tgt)
            if s == t:
                raise GraphError(f"zero edge vector at vertex {s}")
            for v in (s, t):
                index.setdefault(v, len(index))
            edges.append((index[s], index[t]))
        for v in extra_vertices:
            index.setdefault(_vertex(v), len(index))
        if dim is None:
            if species is not None:
                dim = len(species)
            elif index:
                dim = len(next(iter(index)))
            else:
                raise GraphError("cannot infer the dimension of an empty graph")
        return cls(dim, tuple(index), tuple(edges), tuple(species) if species else None)

    # ------------------------------------------------------------------ basic data
    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def edge_coords(self) -> list[tuple[Vertex, Vertex]]:
        return [(self.vertices[s], self.vertices[t]) for s, t in self.edges]

    @cached_property
    def edge_vectors(self) -> tuple[Vertex, ...]:
        return tuple(sub(self.vertices[t], self.vertices[s]) for s, t in self.edges)

    @cached_property
    def sources(self) -> tuple[Vertex, ...]:
        """Distinct source vertices, in order of first appearance."""
        out: dict[Vertex, None] = {}
        for s, _ in self.edges:
            out.setdefault(self.vertices[s], None)
        return tuple(out)

    @cached_property
    def integer_scale(self) -> int:
        """Common denominator of all coordinates."""
        return reduce(lcm, (c.denominator for v in self.vertices for c in v), 1)

    @cached_property
    def int_vertices(self) -> tuple[tuple[int, ...], ...]:
        """Vertices scaled by :attr:`integer_scale`; sign predicates are unchanged."""
        d = self.integer_scale
        return tuple(tuple(int(c * d) for c in v) for v in self.vertices)

    def species_names(self) -> tuple[str, ...]:
        return self.species or tuple(f"x{i + 1}" for i in range(self.dim))

    # ------------------------------------------------------------------ equality
    def _key(self):
        return (self.dim, frozenset(self.vertices), frozenset(self.edge_coords()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, EGraph):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"EGraph(dim={self.dim}, vertices={len(self.vertices)}, edges={len(self.edges)})"

    # ------------------------------------------------------------------ transforms
    def map_vertices(self, fn) -> "EGraph":
        """Apply ``fn`` to every vertex (must stay injective on the vertex set)."""
        new = [_vertex(fn(v)) for v in self.vertices]
        return EGraph(self.dim if not new else len(new[0]), tuple(new), self.edges)

    def with_edge_order(self, order: Sequence[int]) -> "EGraph":
        return EGraph(self.dim, self.vertices, tuple(self.edges[i] for i in order),
                      self.species, self.labels)


def source_vertices(G: EGraph) -> frozenset:
    """Set of coordinate vectors that are tails of some edge."""
    return frozenset(G.sources)


def is_reversible(G: EGraph) -> bool:
    es = set(G.edges)
    return all((t, s) in es for s, t in es)


def _reachable(G: EGraph, start: int) -> set[int]:
    adj: dict[int, list[int]] = {}
    for s, t in G.edges:
        adj.setdefault(s, []).append(t)
    seen = {start}
    todo = deque([start])
    while todo:
        u = todo.popleft()
        for v in adj.get(u, ()):
            if v not in seen:
                seen.add(v)
                todo.append(v)
    return seen


def is_weakly_reversible(G: EGraph) -> bool:
    """Every edge s -> t lies on a directed cycle, i.e. t reaches s."""
    cache: dict[int, set[int]] = {}
    for s, t in G.edges:
        if t not in cache:
            cache[t] = _reachable(G, t)
        if s not in cache[t]:
            return False
    return True


def stoichiometric_subspace(G: EGraph) -> Subspace:
    """Row-reduced basis of span{target - source}."""
    return Subspace.span(G.edge_vectors, G.dim)
