import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from projtheta.graph import (DimacsError, Graph, circulant, clique_plus_isolated, clique_union,
                             complement, complete, cycle, disjoint_union, empty, generate,
                             induced_subgraph, parse_dimacs, parse_family, path, petersen,
                             random_graph, read_dimacs, write_dimacs)


@st.composite
def graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, frozenset(p for p, k in zip(pairs, keep) if k))


def test_parse_dimacs_examples():
    g = parse_dimacs("p edge 3 2\ne 1 3\ne 2 3")
    assert g == Graph(3, frozenset({(1, 3), (2, 3)}))
    assert parse_dimacs("p edge 2 0") == Graph(2, frozenset())
    with pytest.raises(DimacsError, match="before"):
        parse_dimacs("e 1 2\np edge 2 1")


def test_parse_dimacs_tolerates_duplicates_and_comments():
    g = parse_dimacs("c a comment\np edge 3 1\ne 1 2\ne 2 1\ne 1 2\n")
    assert g.edges == frozenset({(1, 2)})


@pytest.mark.parametrize("text", ["e 1 2", "p edge 2 1\ne 1 3", "p edge 2 1\ne 1 1",
                                  "p edge x 1", "p edge 2 1\ne 1"])
def test_parse_dimacs_errors(text):
    with pytest.raises(DimacsError):
        parse_dimacs(text)


def test_edge_count_mismatch_only_warns():
    with pytest.warns(UserWarning):
        g = parse_dimacs("p edge 3 5\ne 1 2")
    assert g.m == 1


def test_read_dimacs_file(tmp_path):
    f = tmp_path / "g.col"
    f.write_text(write_dimacs(petersen(), comment="petersen"))
    assert read_dimacs(f) == petersen()


def test_complement_examples():
    assert complement(complete(3)) == empty(3)
    c4 = complement(clique_union(2, 2))
    assert c4.edges == frozenset({(1, 3), (1, 4), (2, 3), (2, 4)})
    assert all(len(c4.neighbours(v)) == 2 for v in range(1, 5))


def test_complement_involution_random():
    g = random_graph(6, 0.5, seed=3)
    assert complement(complement(g)) == g


def test_generate_examples():
    g = clique_union(4, 3, 2)
    assert (g.n, g.m) == (9, 10)
    assert circulant(5, [1]) == cycle(5)
    g = clique_plus_isolated(8, 1)
    assert (g.n, g.m) == (9, 28)
    assert generate("clique_union", 4, 3, 2) == clique_union(4, 3, 2)
    assert parse_family("circulant:8,1,2") == circulant(8, [1, 2])
    assert parse_family("petersen") == petersen()


@pytest.mark.parametrize("bad", [lambda: complete(0), lambda: clique_union(2, 0),
                                 lambda: circulant(6, [4]), lambda: circulant(6, [0]),
                                 lambda: generate("nosuch", 3), lambda: parse_family("cycle:x")])
def test_generate_errors(bad):
    with pytest.raises(ValueError):
        bad()


def test_petersen_structure():
    g = petersen()
    assert (g.n, g.m) == (10, 15)
    assert set(g.degrees()) == {3}
    # strongly regular (10, 3, 0, 1): adjacent pairs share no neighbour,
    # distinct non-adjacent pairs share exactly one
    adj = g.adjacency()
    common = adj @ adj
    off = ~np.eye(10, dtype=bool)
    assert (common[(adj == 1)] == 0).all()
    assert (common[(adj == 0) & off] == 1).all()


def test_disjoint_union_examples():
    g = disjoint_union(complete(2), complete(1))
    assert g == clique_plus_isolated(2, 1)
    g = disjoint_union(complete(3), complete(3))
    assert (g.n, g.m) == (6, 6)
    assert disjoint_union(empty(2), empty(3)) == empty(5)


def test_induced_subgraph_examples():
    assert induced_subgraph(complete(9), {1, 2, 3}) == complete(3)
    assert induced_subgraph(cycle(5), {1, 2, 3}) == path(3)
    h = induced_subgraph(complement(clique_plus_isolated(2, 7)), {1, 2, 3})
    assert h == Graph(3, frozenset({(1, 3), (2, 3)}))
    with pytest.raises(ValueError):
        induced_subgraph(cycle(5), set())
    with pytest.raises(ValueError):
        induced_subgraph(cycle(5), {0, 1})


def test_vertex_transitive_flags():
    assert cycle(5).vertex_transitive and petersen().vertex_transitive
    assert clique_union(3, 3, 3).vertex_transitive
    assert not clique_union(4, 3, 2).vertex_transitive
    assert not path(4).vertex_transitive


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        Graph(3, frozenset({(1, 1)}))
    with pytest.raises(ValueError):
        Graph(3, frozenset({(1, 4)}))
    assert Graph(3, frozenset({(2, 1), (1, 2)})).m == 1


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_complement_properties(g):
    h = complement(g)
    assert complement(h) == g
    assert h.m == g.n * (g.n - 1) // 2 - g.m
    adj = g.adjacency()
    assert (adj == adj.T).all() and adj.trace() == 0


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_dimacs_round_trip(g):
    assert parse_dimacs(write_dimacs(g)) == g


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 5), min_size=1, max_size=4))
def test_clique_union_counts(sizes):
    g = clique_union(*sizes)
    assert g.m == sum(s * (s - 1) // 2 for s in sizes)
    assert len(g.components()) == len(sizes)
