"""Random E-graph generators shared by the test modules."""
from fractions import Fraction

import numpy as np
from hypothesis import strategies as st

from crn_tdi.egraph import EGraph
from crn_tdi.endotactic import is_endotactic

HALF_GRID = [Fraction(i, 2) for i in range(-6, 7)]


def random_point(rng, n, grid=HALF_GRID):
    return tuple(grid[i] for i in rng.integers(0, len(grid), size=n))


def random_graph(rng, n, max_edges=6, min_edges=1, grid=HALF_GRID):
    """Random directed edges between random half-integer points."""
    m = int(rng.integers(min_edges, max_edges + 1))
    pool = [random_point(rng, n, grid) for _ in range(int(rng.integers(2, m + 2)))]
    pool = list(dict.fromkeys(pool))
    if len(pool) < 2:
        pool.append(tuple(p + 1 for p in pool[0]))
    edges = set()
    for _ in range(m):
        i, j = rng.choice(len(pool), size=2, replace=False)
        edges.add((pool[i], pool[j]))
    return EGraph.from_edges(sorted(edges), dim=n)


def random_weakly_reversible(rng, n, max_cycles=3, max_len=4, reversible=False):
    edges = set()
    for _ in range(int(rng.integers(1, max_cycles + 1))):
        k = int(rng.integers(2, max_len + 1))
        cyc = list(dict.fromkeys(random_point(rng, n) for _ in range(k)))
        if len(cyc) < 2:
            continue
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            edges.add((a, b))
            if reversible:
                edges.add((b, a))
    if not edges:
        return random_weakly_reversible(rng, n, max_cycles, max_len, reversible)
    return EGraph.from_edges(sorted(edges), dim=n)


def random_endotactic(rng, n, max_edges=8):
    """Weakly reversible core plus random extra edges, kept only if endotactic."""
    while True:
        core = random_weakly_reversible(rng, n, max_cycles=2, max_len=3)
        pairs = set(core.edge_coords())
        verts = list(core.vertices)
        for _ in range(int(rng.integers(0, 4))):
            if len(pairs) >= max_edges:
                break
            a = verts[int(rng.integers(len(verts)))]
            b = random_point(rng, n) if rng.random() < 0.5 else verts[int(rng.integers(len(verts)))]
            if a != b:
                pairs.add((a, b))
        if len(pairs) > max_edges:
            continue
        G = EGraph.from_edges(sorted(pairs), dim=n)
        if len(G.sources) >= 2 and is_endotactic(G).endotactic and len(G.edges) <= max_edges:
            return G


def random_non_endotactic(rng, n, max_edges=6):
    while True:
        G = random_graph(rng, n, max_edges)
        if not is_endotactic(G).endotactic:
            return G


@st.composite
def egraphs(draw, max_dim=3, max_edges=6):
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(1, max_dim))
    return random_graph(np.random.default_rng(seed), n, max_edges)


@st.composite
def weakly_reversible_egraphs(draw, max_dim=3):
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(1, max_dim))
    return random_weakly_reversible(np.random.default_rng(seed), n)
