import pytest

from covermeans import generators
from covermeans.graph import Multigraph


def corpus():
    """The graphs every cross-check runs on."""
    return {
        "K4": generators.complete(4),
        "petersen": generators.petersen(),
        "C6": generators.cycle(6),
        "K34": generators.complete_bipartite(3, 4),
        "K23": generators.complete_bipartite(2, 3),
        "barbell": generators.barbell(),
        "rr20": generators.random_regular(20, 3, seed=7),
    }


CORPUS = corpus()


@pytest.fixture(params=sorted(CORPUS))
def any_graph(request):
    return request.param, CORPUS[request.param]


@pytest.fixture
def k4():
    return generators.complete(4)


@pytest.fixture
def petersen():
    return generators.petersen()


@pytest.fixture
def k23():
    return generators.complete_bipartite(2, 3)


@pytest.fixture
def k34():
    return generators.complete_bipartite(3, 4)


@pytest.fixture
def loopy():
    # loop at 0, a parallel pair 1-2, and a triangle 0-1-2
    return Multigraph(3, ((0, 0), (0, 1), (1, 2), (1, 2), (2, 0)))


def standard_bases(g):
    """A dart, a two-edge tube core and a periodic ray, all starting at vertex 0."""
    from covermeans.cover import CoverPath, RaySpec
    from covermeans.graph import find_cycle

    d0 = int(g.incidence[0][0])
    d1 = next(int(d) for d in g.incidence[int(g.head[d0])] if d != d0 ^ 1)
    tube = (CoverPath(0), CoverPath(0, (d0,)), CoverPath(0, (d0, d1)))
    cyc = tuple(find_cycle(g))
    ray = RaySpec(cyc)
    return d0, tube, ray
