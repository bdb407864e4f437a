import numpy as np
import pytest

from covermeans import generators
from covermeans.graph import (
    GraphError,
    Multigraph,
    NotBipartiteError,
    NotSimpleError,
    classify,
    edge_degree,
    find_cycle,
    line_graph,
    load_graph,
    squared_graph,
    two_coloring,
)
from covermeans.cover import is_nonbacktracking

from conftest import CORPUS


def test_load_complete_graph():
    g = load_graph("0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n")
    assert g.n_vertices == 4 and g.n_edges == 6
    assert list(g.degrees) == [3, 3, 3, 3]


def test_load_counts_loop_twice():
    g = load_graph("# loop then edge\n0 0\n0 1\n")
    assert g.degree(0) == 3
    assert g.degree(1) == 1


@pytest.mark.parametrize(
    "text",
    ["0 1\n2 3\n", "", "# nothing\n", "0 1 2\n", "a b\n", "0 -1\n"],
    ids=["disconnected", "empty", "comment-only", "three-fields", "non-integer", "negative"],
)
def test_load_rejects(text):
    with pytest.raises(GraphError):
        load_graph(text)


def test_edge_ids_follow_file_order():
    g = load_graph("2 1\n0 1\n")
    assert g.edges == ((2, 1), (0, 1))
    assert g.dart(1, 2) == 1


def test_classify_k4():
    cls = classify(generators.complete(4))
    assert cls.regular_q == 2
    assert not cls.bipartite
    assert cls.semiregular_pq is None


def test_classify_k34():
    cls = classify(generators.complete_bipartite(3, 4))
    assert cls.regular_q is None
    assert cls.semiregular_pq == (2, 3)
    assert [len(p) for p in cls.bipartite_parts] == [4, 3]
    # first part holds the degree-(p+1) vertices
    assert all(d == 3 for d in generators.complete_bipartite(3, 4).degrees[list(cls.bipartite_parts[0])])


def test_classify_petersen_ramanujan():
    cls = classify(generators.petersen())
    assert cls.regular_q == 2 and not cls.bipartite and cls.ramanujan is True


def test_classify_barbell_not_ramanujan():
    cls = classify(generators.barbell())
    assert cls.regular_q == 2 and cls.ramanujan is False


def test_loop_makes_graph_nonbipartite(loopy):
    assert two_coloring(loopy) is None
    assert not loopy.is_simple


@pytest.mark.parametrize("name,expected", [("K4", 4), ("K23", 3)])
def test_edge_degree(name, expected):
    g = CORPUS[name]
    assert {edge_degree(g, e) for e in range(g.n_edges)} == {expected}


def test_edge_degree_path():
    p3 = Multigraph(3, ((0, 1), (1, 2)))
    assert [edge_degree(p3, e) for e in range(2)] == [1, 1]


def test_edge_degree_needs_simple(loopy):
    with pytest.raises(NotSimpleError):
        edge_degree(loopy, 0)


def test_line_graph_triangle_is_triangle():
    lg = line_graph(generators.cycle(3))
    assert lg.n_vertices == 3 and lg.n_edges == 3
    assert list(lg.degrees) == [2, 2, 2]


def test_line_graph_star_is_triangle():
    star = generators.complete_bipartite(1, 3)
    lg = line_graph(star)
    assert lg.n_vertices == 3 and lg.n_edges == 3


def test_line_graph_k4():
    lg = line_graph(generators.complete(4))
    assert lg.n_vertices == 6
    assert set(lg.degrees.tolist()) == {4}


@pytest.mark.parametrize("name", ["K4", "petersen", "C6", "K34", "K23", "barbell", "rr20"])
def test_line_graph_degree_is_edge_degree(name):
    g = CORPUS[name]
    lg = line_graph(g)
    assert [lg.degree(e) for e in range(g.n_edges)] == [edge_degree(g, e) for e in range(g.n_edges)]


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_handshake(name):
    g = CORPUS[name]
    assert g.degrees.sum() == 2 * g.n_edges


def test_handshake_with_loops(loopy):
    assert loopy.degrees.sum() == 2 * loopy.n_edges


def test_squared_c6_is_triangle():
    gp, ids = squared_graph(generators.cycle(6), 1)
    assert ids == (0, 2, 4)
    assert gp.n_vertices == 3
    assert sorted(tuple(sorted(e)) for e in gp.edges) == [(0, 1), (0, 2), (1, 2)]


def test_squared_k33_triples_each_edge():
    for part in (1, 2):
        gp, _ = squared_graph(generators.complete_bipartite(3, 3), part)
        pairs = sorted(tuple(sorted(e)) for e in gp.edges)
        assert pairs == [(0, 1)] * 3 + [(0, 2)] * 3 + [(1, 2)] * 3
        assert set(gp.degrees.tolist()) == {6}


def test_squared_k23_degree_three_part():
    g = generators.complete_bipartite(2, 3)
    cls = classify(g)
    assert cls.semiregular_pq == (1, 2)
    gp, ids = squared_graph(g, 2)
    assert ids == (0, 1)
    assert gp.edges == ((0, 1),) * 3


def test_squared_keeps_loops_from_parallel_edges():
    # 0 and 1 joined twice: 0-1-0 through the two edges is non-backtracking
    g = Multigraph(2, ((0, 1), (0, 1)))
    gp, _ = squared_graph(g, 1)
    assert gp.edges == ((0, 0),)
    assert gp.degree(0) == 2


def test_squared_needs_bipartite():
    with pytest.raises(NotBipartiteError):
        squared_graph(generators.complete(4), 1)


@pytest.mark.parametrize(
    "g",
    [
        generators.cycle(6),
        generators.complete_bipartite(3, 3),
        generators.complete_bipartite(3, 4),
        generators.complete_bipartite(2, 3),
        generators.complete_bipartite(3, 5),
        generators.subdivision(generators.complete(4)),
        generators.subdivision(generators.petersen()),
    ],
    ids=["C6", "K33", "K34", "K23", "K35", "sub-K4", "sub-petersen"],
)
def test_squared_graph_degrees(g):
    cls = classify(g)
    p, q = cls.semiregular_pq
    g1, _ = squared_graph(g, 1)
    g2, _ = squared_graph(g, 2)
    # part 1 has degree p+1 with neighbours of degree q+1
    assert classify(g1).regular_q + 1 == (p + 1) * q
    assert classify(g2).regular_q + 1 == p * (q + 1)
    if p == q and q >= 2:
        assert not classify(g1).bipartite and not classify(g2).bipartite


@pytest.mark.parametrize("name", ["K4", "petersen", "C6", "K34", "barbell", "rr20"])
def test_find_cycle_is_periodic_nonbacktracking(name):
    g = CORPUS[name]
    cyc = find_cycle(g)
    start = int(g.tail[cyc[0]])
    assert is_nonbacktracking(g, start, cyc * 3)


def test_find_cycle_multigraph(loopy):
    cyc = find_cycle(loopy)
    assert is_nonbacktracking(loopy, int(loopy.tail[cyc[0]]), cyc * 3)


def test_random_regular_is_seeded():
    a = generators.random_regular(20, 3, seed=3)
    b = generators.random_regular(20, 3, seed=3)
    assert a == b
    assert classify(a).regular_q == 2 and a.is_simple


def test_petersen_girth_five():
    g = generators.petersen()
    # shortest cycle through BFS: no vertex sees a repeated neighbour within distance 2
    girth = min(_shortest_cycle_through(g, v) for v in range(g.n_vertices))
    assert girth == 5
    assert g.n_vertices == 10 and set(g.degrees.tolist()) == {3}


def _shortest_cycle_through(g, v):
    best = np.inf
    dist = {v: 0}
    parent = {v: None}
    frontier = [v]
    while frontier:
        nxt = []
        for x in frontier:
            for y in g.neighbors(x):
                if y not in dist:
                    dist[y], parent[y] = dist[x] + 1, x
                    nxt.append(y)
                elif parent[x] != y:
                    best = min(best, dist[x] + dist[y] + 1)
        frontier = nxt
    return best
