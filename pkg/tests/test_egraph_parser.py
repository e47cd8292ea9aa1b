from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings

from crn_tdi.egraph import (EGraph, GraphError, is_reversible, is_weakly_reversible,
                            source_vertices, stoichiometric_subspace)
from crn_tdi.parser import (ParseError, format_number, parse_document, parse_network,
                            serialize_network)

from conftest import FIXTURES
from netgen import egraphs, weakly_reversible_egraphs


def test_birth_death_structure(graph_A):
    assert graph_A.dim == 1 and graph_A.n_edges == 2
    assert source_vertices(graph_A) == {(0,), (2,)}
    assert is_reversible(graph_A) and is_weakly_reversible(graph_A)
    assert stoichiometric_subspace(graph_A).dim == 1


def test_fixture_B_structure(graph_B):
    assert sorted(graph_B.edge_coords()) == [((1,), (0,)), ((1,), (3,)), ((3,), (1,))]
    assert not is_weakly_reversible(graph_B)


def test_circadian_basic_structure(graph_C):
    assert graph_C.species == ("P", "T", "C")
    assert graph_C.n_edges == 7
    assert not is_weakly_reversible(graph_C)


def test_powerlaw_reads_real_exponents():
    G = parse_network((FIXTURES / "powerlaw_fig8.crn").read_text())
    assert (Fraction(-23, 10), 0, 0) in G.sources
    assert G.edge_vectors[3] == (Fraction(3, 10), Fraction(-3, 10), Fraction(4, 5))


def test_every_fixture_parses():
    for path in FIXTURES.glob("*.crn"):
        assert parse_document(path.read_text()).graph.n_edges > 0


def test_empty_graph_and_validation():
    G = EGraph(2, ((1, 1),))
    assert G.n_edges == 0 and stoichiometric_subspace(G).dim == 0
    with pytest.raises(GraphError):
        EGraph.from_edges([((0,), (0,))])
    with pytest.raises(GraphError):
        EGraph(1, ((0,), (1,)), ((0, 1), (0, 1)))
    with pytest.raises(GraphError):
        EGraph(1, ((0,), (0,)))


@pytest.mark.parametrize("text, line, fragment", [
    ("species X\nrxn X -> Y\n", 2, "undeclared species"),
    ("species X\nrxn X -> X\n", 2, "zero edge"),
    ("species X\nrxn X -> 2X\nrxn X -> 2X\n", 3, "duplicate edge"),
    ("edge (0,0) -> (1,0,0)\n", 1, "dimension mismatch"),
    ("species X\nfoo\n", 2, "unknown statement"),
    ("species X\nrxn X => 0\n", 2, "expected '->'"),
    ("species X\nepsilon 2\n", 2, "epsilon"),
    ("", 1, "dimension unknown"),
])
def test_parse_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(ParseError) as info:
        parse_network(text)
    assert info.value.line == line
    assert fragment in info.value.message


def test_reaction_notation_coefficients():
    G = parse_network("species A B\nrxn 2A + 3 B <-> 1.5B\n")
    assert set(G.edge_coords()) == {((2, 3), (0, Fraction(3, 2))), ((0, Fraction(3, 2)), (2, 3))}


def test_format_number():
    assert format_number(Fraction(-23, 10)) == "-2.3"
    assert format_number(Fraction(1, 3)) == "1/3"
    assert format_number(4) == "4"


@settings(max_examples=60, deadline=None)
@given(egraphs())
def test_serialize_round_trip(G):
    assert parse_network(serialize_network(G)) == G


def _scc_weakly_reversible(G):
    D = nx.DiGraph(list(G.edges))
    comp = {v: i for i, c in enumerate(nx.strongly_connected_components(D)) for v in c}
    return all(comp[s] == comp[t] for s, t in G.edges)


@settings(max_examples=80, deadline=None)
@given(egraphs(max_edges=7))
def test_weak_reversibility_matches_scc(G):
    assert is_weakly_reversible(G) == _scc_weakly_reversible(G)
    if is_reversible(G):
        assert is_weakly_reversible(G)


@settings(max_examples=30, deadline=None)
@given(weakly_reversible_egraphs())
def test_generated_cycles_are_weakly_reversible(G):
    assert is_weakly_reversible(G)
