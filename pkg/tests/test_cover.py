from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covermeans import generators
from covermeans.cover import (
    Arc,
    CoverPath,
    EdgeSphere,
    Horocycle,
    OracleSizeError,
    RaySpec,
    RegionError,
    Sphere,
    Tube,
    arc_counts,
    edge_arc_counts,
    enumerate_region,
    horocycle_counts,
    is_nonbacktracking,
    parse_ray,
    parse_walk_paths,
    project,
    region_counts,
    sphere_counts,
    tree_distance,
    tube_counts,
)

from conftest import CORPUS, standard_bases


def _regions(g, r):
    d0, tube, ray = standard_bases(g)
    return [Sphere(0, r), EdgeSphere(0, r), Arc(d0, r), Tube(tube, r), Horocycle(ray, r)]


@pytest.mark.parametrize("name", sorted(CORPUS))
@pytest.mark.parametrize("r", range(0, 6))
def test_counts_match_enumeration(name, r):
    g = CORPUS[name]
    for region in _regions(g, r):
        assert region_counts(g, region) == project(g, region, enumerate_region(g, region)), region


def test_k4_sphere_radius_two():
    assert sphere_counts(generators.complete(4), 0, 2) == {1: 2, 2: 2, 3: 2}


def test_sphere_sizes_regular():
    g = generators.petersen()
    for r in range(1, 12):
        assert sum(sphere_counts(g, 3, r).values()) == 3 * 2 ** (r - 1)


def test_counts_are_exact_past_int64():
    g = generators.petersen()
    counts = sphere_counts(g, 0, 70)
    total = sum(counts.values())
    assert total == 3 * 2**69
    assert all(isinstance(c, int) for c in counts.values())


def test_arcs_partition_sphere():
    # S_{r+1}(v) is the disjoint union of the arcs through the darts leaving v
    g = generators.complete_bipartite(3, 4)
    for v in (0, 4):
        for r in range(6):
            total = Counter()
            for d in g.incidence[v]:
                total.update(arc_counts(g, int(d), r))
            assert dict(total) == sphere_counts(g, v, r + 1)


def test_tube_around_a_point_is_a_sphere():
    g = generators.petersen()
    for r in range(6):
        assert tube_counts(g, (CoverPath(4),), r) == sphere_counts(g, 4, r)


def test_tube_around_a_non_root_point_is_a_sphere():
    g = generators.petersen()
    d0 = int(g.incidence[0][0])
    v = int(g.head[d0])
    for r in range(6):
        assert tube_counts(g, (CoverPath(0, (d0,)),), r) == sphere_counts(g, v, r)


def test_tube_around_an_edge_is_two_arcs():
    g = generators.complete(4)
    d = g.dart(0, 1)
    X = (CoverPath(0), CoverPath(0, (d,)))
    for r in range(1, 6):
        # arcs beyond each endpoint, excluding the core edge itself
        beyond_1 = Counter()
        for e in g.incidence[1]:
            if e != d ^ 1:
                beyond_1.update(arc_counts(g, int(e), r - 1))
        beyond_0 = Counter()
        for e in g.incidence[0]:
            if e != d:
                beyond_0.update(arc_counts(g, int(e), r - 1))
        assert tube_counts(g, X, r) == dict(beyond_0 + beyond_1)


def test_horocycle_radius_zero_is_the_base_point():
    g = generators.petersen()
    _, _, ray = standard_bases(g)
    assert horocycle_counts(g, ray, 0) == {ray.start(g): 1}


def test_horocycle_is_an_arc():
    # the piece at radius r is the arc based at v_r pointing away from v_{r+1}
    g = generators.petersen()
    _, _, ray = standard_bases(g)
    for r in range(1, 8):
        d = ray.darts(r + 1)[r]
        assert horocycle_counts(g, ray, r) == arc_counts(g, d ^ 1, r)


def test_horocycle_sizes_grow_like_q_to_r():
    g = generators.petersen()
    _, _, ray = standard_bases(g)
    sizes = [sum(horocycle_counts(g, ray, r).values()) for r in range(1, 9)]
    assert sizes == [2**r for r in range(1, 9)]


def test_edge_arc_radius_zero_is_the_edge():
    g = generators.petersen()
    assert edge_arc_counts(g, 7, 0) == {3: 1}


def _walks_from_dart(g, d, length):
    level = [(d,)]
    for _ in range(length):
        level = [w + (int(e),) for w in level for e in g.incidence[int(g.head[w[-1]])] if e != w[-1] ^ 1]
    return level


@pytest.mark.parametrize("name", ["K4", "petersen", "K34", "C6"])
def test_edge_arc_matches_walks(name):
    g = CORPUS[name]
    for d in (0, 3):
        for r in range(6):
            walks = _walks_from_dart(g, d, r)
            assert edge_arc_counts(g, d, r) == dict(Counter(w[-1] // 2 for w in walks))


def test_loops_and_parallel_edges(loopy):
    for region in _regions(loopy, 4):
        assert region_counts(loopy, region) == project(loopy, region, enumerate_region(loopy, region))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 9), st.integers(0, 7))
def test_sphere_property_petersen(v, r):
    g = generators.petersen()
    assert sphere_counts(g, v, r) == project(g, Sphere(v, r), enumerate_region(g, Sphere(v, r)))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**16))
def test_random_graph_spheres(seed):
    g = generators.random_regular(12, 3, seed)
    for r in range(5):
        assert sphere_counts(g, 0, r) == project(g, Sphere(0, r), enumerate_region(g, Sphere(0, r)))


def test_tree_distance():
    g = generators.complete(4)
    a = CoverPath(0, (g.dart(0, 1), g.dart(1, 2)))
    b = CoverPath(0, (g.dart(0, 1), g.dart(1, 3)))
    assert tree_distance(a, b) == 2
    assert tree_distance(a, CoverPath(0)) == 2
    with pytest.raises(RegionError):
        tree_distance(a, CoverPath(1))


def test_is_nonbacktracking():
    g = generators.complete(4)
    d = g.dart(0, 1)
    assert is_nonbacktracking(g, 0, (d, g.dart(1, 2)))
    assert not is_nonbacktracking(g, 0, (d, d ^ 1))
    assert not is_nonbacktracking(g, 2, (d,))


def test_loop_can_be_traversed_twice_in_the_same_sense(loopy):
    d = 0  # loop dart at vertex 0
    assert is_nonbacktracking(loopy, 0, (d, d))
    assert not is_nonbacktracking(loopy, 0, (d, d ^ 1))


def test_disconnected_tube_core_rejected():
    g = generators.complete(4)
    X = (CoverPath(0), CoverPath(0, (g.dart(0, 1), g.dart(1, 2))))
    with pytest.raises(RegionError):
        tube_counts(g, X, 1)


def test_negative_radius_rejected():
    with pytest.raises(RegionError):
        sphere_counts(generators.complete(4), 0, -1)


def test_oracle_size_guard():
    g = generators.complete(8)
    with pytest.raises(OracleSizeError):
        enumerate_region(g, Sphere(0, 9))


def test_parse_walk_paths():
    g = generators.petersen()
    X = parse_walk_paths(g, ["# core", "0", "0 1", "0 1 2"])
    assert [len(x) for x in X] == [0, 1, 2]
    with pytest.raises(RegionError):
        parse_walk_paths(g, ["0 1 0"])


def test_parse_ray():
    g = generators.petersen()
    ray = parse_ray(g, "cycle: 0 1 2 3 4\n")
    assert ray.start(g) == 0
    assert len(ray.cycle) == 5
    with pytest.raises(RegionError):
        parse_ray(g, "cycle: 0 1\n")
    with pytest.raises(ValueError):
        parse_ray(g, "cycle: 0 1 3\n")


def test_bad_ray_rejected():
    g = generators.complete(4)
    with pytest.raises(RegionError):
        horocycle_counts(g, RaySpec((g.dart(0, 1), g.dart(1, 0))), 2)


def test_k23_edge_sphere_totals():
    # from a degree-3 vertex: 3 edges, then one onward edge each, then two each
    g = generators.complete_bipartite(2, 3)
    totals = [sum(region_counts(g, EdgeSphere(0, r)).values()) for r in range(4)]
    assert totals == [3, 3, 6, 6]
    assert totals == [len(enumerate_region(g, EdgeSphere(0, r))) for r in range(4)]
