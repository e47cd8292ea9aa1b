from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.spatial import ConvexHull

from crn_tdi.egraph import EGraph
from crn_tdi.endotactic import check_direction, is_endotactic

from conftest import fixture_graph
from netgen import egraphs, random_graph, weakly_reversible_egraphs


def test_check_direction_examples(graph_B):
    bad = check_direction(graph_B, (1,))
    assert not bad.ok
    assert graph_B.edge_coords()[bad.violating_edge] == ((1,), (0,))
    assert check_direction(graph_B, (-1,)).ok
    assert check_direction(graph_B, (0,)).ok
    with pytest.raises(ValueError):
        check_direction(graph_B, (1, 0))


def test_fixture_verdicts(graph_A, graph_B, graph_C):
    assert is_endotactic(graph_A).endotactic
    assert is_endotactic(graph_C).endotactic
    res = is_endotactic(graph_B)
    assert not res.endotactic and res.witness.direction == (1,)
    assert res.to_json()["witness_direction"] == ["1"]


def test_powerlaw_fixture_has_open_failure_region():
    G = fixture_graph("powerlaw_fig8.crn")
    assert not check_direction(G, (31, -24, 0)).ok
    assert not is_endotactic(G).endotactic


def test_circadian_general_fails_only_on_a_hyperplane():
    G = fixture_graph("circadian_general.crn")
    res = is_endotactic(G)
    assert not res.endotactic
    assert not check_direction(G, (-1, -1, 0, 1, 0, 0)).ok
    rng = np.random.default_rng(3)
    for _ in range(300):
        w = rng.normal(size=6)
        assert check_direction(G, tuple(Fraction(float(x)) for x in w)).ok


def test_empty_graph_is_endotactic():
    assert is_endotactic(EGraph(2, ((0, 0),))).endotactic


def sampled_failure(G, rng, n_dirs=5000):
    W = rng.normal(size=(n_dirs, G.dim))
    S = np.array([G.vertices[s] for s, _ in G.edges], float)
    E = np.array(G.edge_vectors, float)
    lv, sl = W @ S.T, W @ E.T
    for i in range(n_dirs):
        bad = sl[i] < 0
        if bad.any():
            m = lv[i][bad].min()
            if not np.any((sl[i] > 0) & (lv[i] < m)):
                # confirm exactly to rule out float ties
                w = tuple(Fraction(float(x)) for x in W[i])
                if not check_direction(G, w).ok:
                    return w
    return None


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_flats_agree_with_face_enumeration(seed):
    rng = np.random.default_rng(seed)
    G = random_graph(rng, int(rng.integers(1, 4)), 5)
    fast = is_endotactic(G)
    assert fast.endotactic == is_endotactic(G, method="faces").endotactic
    if G.dim <= 2:
        assert fast.endotactic == is_endotactic(G, method="faces-lp").endotactic


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_sampling_oracle_never_contradicts(seed):
    rng = np.random.default_rng(seed)
    G = random_graph(rng, int(rng.integers(1, 4)), 6)
    res = is_endotactic(G)
    if res.endotactic:
        assert sampled_failure(G, rng, 2000) is None
    else:
        assert not check_direction(G, res.witness.direction).ok


@settings(max_examples=60, deadline=None)
@given(weakly_reversible_egraphs())
def test_weakly_reversible_implies_endotactic(G):
    assert is_endotactic(G).endotactic


@settings(max_examples=40, deadline=None)
@given(egraphs(max_edges=5), st.data())
def test_verdict_invariances(G, data):
    verdict = is_endotactic(G).endotactic
    shift = data.draw(st.lists(st.integers(-5, 5), min_size=G.dim, max_size=G.dim))
    assert is_endotactic(G.map_vertices(lambda v: tuple(a + b for a, b in zip(v, shift)))) \
        .endotactic == verdict
    # unimodular shear plus a positive scaling is invertible
    c = data.draw(st.integers(-3, 3))
    if G.dim >= 2:
        shear = lambda v: (v[0] + c * v[1],) + tuple(v[1:])
    else:
        shear = lambda v: (Fraction(c or 2) * v[0],)
    assert is_endotactic(G.map_vertices(shear)).endotactic == verdict
    order = data.draw(st.permutations(range(G.n_edges)))
    assert is_endotactic(G.with_edge_order(order)).endotactic == verdict


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_single_source_graphs_are_not_endotactic(seed, n):
    rng = np.random.default_rng(seed)
    s = tuple(int(x) for x in rng.integers(-2, 3, size=n))
    targets = {tuple(int(x) for x in rng.integers(-2, 3, size=n)) for _ in range(3)} - {s}
    if not targets:
        return
    G = EGraph.from_edges([(s, t) for t in sorted(targets)])
    assert not is_endotactic(G).endotactic


def planar_shortcut(G):
    """Check only hull inward normals of the sources and the coordinate axes."""
    src = list(G.sources)
    pts = np.array(src, float)
    dirs = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    if len(pts) >= 3 and np.linalg.matrix_rank(pts - pts[0]) == 2:
        hull = ConvexHull(pts)
        for i, j in hull.simplices:
            p, q = src[i], src[j]
            nrm = (p[1] - q[1], q[0] - p[0])
            inward = any(sum(a * (b - c) for a, b, c in zip(nrm, r, p)) > 0 for r in src)
            dirs.append(nrm if inward else (-nrm[0], -nrm[1]))
    elif len(pts) >= 2:
        p, q = src[0], src[-1]
        dirs += [(p[1] - q[1], q[0] - p[0]), (q[1] - p[1], p[0] - q[0])]
    return all(check_direction(G, w).ok for w in dirs)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_planar_shortcut_cross_check(seed):
    G = random_graph(np.random.default_rng(seed), 2, 6)
    assert planar_shortcut(G) == is_endotactic(G).endotactic
