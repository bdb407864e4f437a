"""Named test graphs."""

from __future__ import annotations

import numpy as np

from .graph import GraphError, Multigraph

MAX_TRIES = 1000


def complete(n: int) -> Multigraph:
    if n < 2:
        raise ValueError("complete graph needs n >= 2")
    return Multigraph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def complete_bipartite(m: int, n: int) -> Multigraph:
    """K_{m,n}; vertices 0..m-1 form the first side."""
    if m < 1 or n < 1:
        raise ValueError("complete bipartite graph needs m, n >= 1")
    return Multigraph(m + n, tuple((i, m + j) for i in range(m) for j in range(n)))


def cycle(n: int) -> Multigraph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Multigraph(n, tuple((i, (i + 1) % n) for i in range(n)))


def petersen() -> Multigraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Multigraph(10, tuple(outer + spokes + inner))


def barbell() -> Multigraph:
    """Cubic graph with a bridge and a small spectral gap.

    Each lobe is a triangular prism with one rung subdivided; the two
    subdivision vertices are joined by the bridge. 14 vertices.
    """
    edges = []
    for o in (0, 7):
        a0, a1, a2, b0, b1, b2, s = range(o, o + 7)
        edges += [(a0, a1), (a1, a2), (a2, a0), (b0, b1), (b1, b2), (b2, b0)]
        edges += [(a1, b1), (a2, b2), (a0, s), (s, b0)]
    edges.append((6, 13))
    return Multigraph(14, tuple(edges))


def random_regular(n: int, d: int, seed: int) -> Multigraph:
    """Uniform simple connected d-regular graph by the pairing model with rejection."""
    if n * d % 2 or not 0 < d < n:
        raise ValueError("random regular graph needs n*d even and 0 < d < n")
    rng = np.random.default_rng(seed)
    for _ in range(MAX_TRIES):
        stubs = np.repeat(np.arange(n), d)
        rng.shuffle(stubs)
        pairs = stubs.reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        keys = {(min(a, b), max(a, b)) for a, b in pairs.tolist()}
        if len(keys) != len(pairs):
            continue
        try:
            return Multigraph(n, tuple(sorted(keys)))
        except GraphError:
            continue
    raise RuntimeError(f"no simple connected {d}-regular graph on {n} vertices after {MAX_TRIES} tries")


def subdivision(g: Multigraph) -> Multigraph:
    """Insert a new vertex in the middle of every edge."""
    edges = []
    for e, (u, v) in enumerate(g.edges):
        m = g.n_vertices + e
        edges += [(u, m), (m, v)]
    return Multigraph(g.n_vertices + g.n_edges, tuple(edges))


NAMES = ("complete", "complete-bipartite", "cycle", "petersen", "barbell", "random-regular", "subdivision-of")


def generate(name: str, *params) -> Multigraph:
    if name == "complete":
        return complete(*map(int, params))
    if name == "complete-bipartite":
        return complete_bipartite(*map(int, params))
    if name == "cycle":
        return cycle(*map(int, params))
    if name == "petersen":
        return petersen(*params)
    if name == "barbell":
        return barbell(*params)
    if name == "random-regular":
        n, d, seed = map(int, params)
        return random_regular(n, d, seed)
    if name == "subdivision-of":
        if not params:
            raise ValueError("subdivision-of needs an inner graph")
        return subdivision(generate(str(params[0]), *params[1:]))
    raise ValueError(f"unknown graph generator {name!r}; choose from {', '.join(NAMES)}")


def from_spec(spec: str) -> Multigraph:
    """Build from ``name[:p1,p2,...]`` or whitespace-separated ``name p1 p2``.

    ``subdivision-of`` takes a nested spec: ``subdivision-of:complete:4``.
    """
    spec = spec.strip()
    if ":" in spec:
        name, _, rest = spec.partition(":")
        if name == "subdivision-of":
            return subdivision(from_spec(rest))
        params = [p for p in rest.replace(",", " ").split()]
    else:
        name, *params = spec.split()
        if name == "subdivision-of":
            return subdivision(from_spec(" ".join(params)))
    try:
        return generate(name, *params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {name!r}: {exc}") from None
