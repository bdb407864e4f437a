"""Finite multigraphs, their classification, line graphs and squared graphs.

Edges keep the ids they were given (file order). Every edge ``e = (u, v)``
carries two *darts* (directed edges): ``2*e`` runs u -> v and ``2*e + 1``
runs v -> u, so reversal is ``d ^ 1``. For a loop both darts run u -> u.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

import numpy as np


class GraphError(ValueError):
    """Malformed, empty or disconnected graph input."""


class NotSimpleError(GraphError):
    pass


class NotBipartiteError(GraphError):
    pass


@dataclass(frozen=True)
class Multigraph:
    n_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.n_vertices <= 0:
            raise GraphError("empty graph")
        for u, v in edges:
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise GraphError(f"edge ({u}, {v}) references a vertex outside 0..{self.n_vertices - 1}")
        if not self._connected():
            raise GraphError("graph is disconnected")

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_darts(self) -> int:
        return 2 * len(self.edges)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """Darts leaving each vertex; a loop contributes both of its darts."""
        out: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for d in range(self.n_darts):
            out[self.tail[d]].append(d)
        return tuple(tuple(x) for x in out)

    @cached_property
    def tail(self) -> np.ndarray:
        t = np.empty(self.n_darts, dtype=np.int64)
        for e, (u, v) in enumerate(self.edges):
            t[2 * e], t[2 * e + 1] = u, v
        t.flags.writeable = False
        return t

    @cached_property
    def head(self) -> np.ndarray:
        h = np.empty(self.n_darts, dtype=np.int64)
        for e, (u, v) in enumerate(self.edges):
            h[2 * e], h[2 * e + 1] = v, u
        h.flags.writeable = False
        return h

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n_vertices, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        deg.flags.writeable = False
        return deg

    def degree(self, v: int) -> int:
        return int(self.degrees[v])

    @cached_property
    def is_simple(self) -> bool:
        seen = set()
        for u, v in self.edges:
            if u == v:
                return False
            key = (min(u, v), max(u, v))
            if key in seen:
                return False
            seen.add(key)
        return True

    def adjacency_matrix(self) -> np.ndarray:
        """Adjacency with edge multiplicities; a loop adds 2 on the diagonal."""
        a = np.zeros((self.n_vertices, self.n_vertices))
        for u, v in self.edges:
            a[u, v] += 1
            a[v, u] += 1
        return a

    def neighbors(self, v: int) -> list[int]:
        return [int(self.head[d]) for d in self.incidence[v]]

    def dart(self, u: int, v: int, edge: Optional[int] = None) -> int:
        """The dart u -> v, along ``edge`` if given, else along the lowest-id edge joining them."""
        if edge is not None:
            a, b = self.edges[edge]
            if (a, b) == (u, v):
                return 2 * edge
            if (b, a) == (u, v):
                return 2 * edge + 1
            raise GraphError(f"edge {edge} does not join {u} and {v}")
        for d in self.incidence[u]:
            if self.head[d] == v:
                return d
        raise GraphError(f"no edge joins {u} and {v}")

    def walk_to_darts(self, walk: Iterable[int]) -> tuple[int, ...]:
        walk = list(walk)
        return tuple(self.dart(a, b) for a, b in zip(walk, walk[1:]))

    def distances_from(self, v: int) -> np.ndarray:
        dist = np.full(self.n_vertices, -1, dtype=np.int64)
        dist[v] = 0
        queue = deque([v])
        while queue:
            x = queue.popleft()
            for y in self.neighbors(x):
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist

    def _connected(self) -> bool:
        adj: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.n_vertices

    def to_text(self) -> str:
        return "".join(f"{u} {v}\n" for u, v in self.edges)


def load_graph(text: str) -> Multigraph:
    """Parse an edge list: one ``u v`` pair per line, ``#`` starts a comment line."""
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphError(f"line {lineno}: vertex ids must be integers, got {raw!r}") from None
        if u < 0 or v < 0:
            raise GraphError(f"line {lineno}: negative vertex id")
        edges.append((u, v))
    if not edges:
        raise GraphError("empty graph")
    n = max(max(u, v) for u, v in edges) + 1
    return Multigraph(n, tuple(edges))


@dataclass(frozen=True)
class GraphClass:
    regular_q: Optional[int] = None
    semiregular_pq: Optional[tuple[int, int]] = None
    bipartite_parts: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = None
    simple: bool = True
    ramanujan: Optional[bool] = field(default=None)

    @property
    def bipartite(self) -> bool:
        return self.bipartite_parts is not None


def two_coloring(g: Multigraph) -> Optional[np.ndarray]:
    """Return a proper 2-colouring with vertex 0 coloured 0, or None if an odd cycle exists."""
    color = np.full(g.n_vertices, -1, dtype=np.int64)
    color[0] = 0
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y in g.neighbors(x):
            if color[y] < 0:
                color[y] = 1 - color[x]
                queue.append(y)
            elif color[y] == color[x]:
                return None
    return color


def classify(g: Multigraph) -> GraphClass:
    """Classify as regular (degree q+1) and/or semiregular (p+1, q+1), with p <= q.

    For semiregular graphs the first part holds the degree-(p+1) vertices; when
    p == q it is the part containing vertex 0.
    """
    deg = g.degrees
    regular_q = int(deg[0]) - 1 if np.all(deg == deg[0]) else None
    color = two_coloring(g)
    parts = None
    semi = None
    if color is not None:
        a = tuple(int(v) for v in np.flatnonzero(color == 0))
        b = tuple(int(v) for v in np.flatnonzero(color == 1))
        da, db = set(deg[list(a)].tolist()), set(deg[list(b)].tolist())
        if len(da) == 1 and len(db) == 1:
            pa, pb = da.pop() - 1, db.pop() - 1
            if pa > pb:
                a, b = b, a
                pa, pb = pb, pa
            semi = (pa, pb)
        parts = (a, b)
    ramanujan = None
    if regular_q is not None:
        from .spectral import is_ramanujan

        ramanujan = is_ramanujan(g)
    return GraphClass(regular_q, semi, parts, g.is_simple, ramanujan)


def edge_degree(g: Multigraph, e: int) -> int:
    if not g.is_simple:
        raise NotSimpleError("edge degree is only defined for simple graphs")
    u, v = g.edges[e]
    return g.degree(u) - 1 + g.degree(v) - 1


def line_graph(g: Multigraph) -> Multigraph:
    """Vertices are the edge ids of ``g``; two are adjacent iff the edges share an endpoint."""
    if not g.is_simple:
        raise NotSimpleError("line graph requires a simple graph")
    ledges = []
    for i, (a, b) in enumerate(g.edges):
        for j in range(i + 1, g.n_edges):
            c, d = g.edges[j]
            if a in (c, d) or b in (c, d):
                ledges.append((i, j))
    return Multigraph(g.n_edges, tuple(ledges))


def squared_graph(g: Multigraph, part: int = 1) -> tuple[Multigraph, tuple[int, ...]]:
    """Graph on one bipartition class with an edge per non-backtracking 2-path.

    Returns the new graph together with the original ids of its vertices
    (new vertex ``i`` is ``ids[i]``). Paths x-m-y and y-m-x give one edge;
    x-m-x through two parallel edges gives a loop.
    """
    if part not in (1, 2):
        raise ValueError("part must be 1 or 2")
    cls = classify(g)
    if cls.bipartite_parts is None:
        raise NotBipartiteError("squared graph requires a bipartite graph")
    ids = cls.bipartite_parts[part - 1]
    index = {v: i for i, v in enumerate(ids)}
    new_edges = []
    for m in cls.bipartite_parts[2 - part]:
        out = g.incidence[m]
        for i in range(len(out)):
            for j in range(i + 1, len(out)):
                x, y = int(g.head[out[i]]), int(g.head[out[j]])
                new_edges.append((index[x], index[y]))
    return Multigraph(len(ids), tuple(new_edges)), ids


def find_cycle(g: Multigraph) -> tuple[int, ...]:
    """A closed walk (as darts) that stays non-backtracking when repeated periodically."""
    for e, (u, v) in enumerate(g.edges):
        if u == v:
            return (2 * e,)
    # parallel edges give a 2-cycle
    seen: dict[tuple[int, int], int] = {}
    for e, (u, v) in enumerate(g.edges):
        key = (min(u, v), max(u, v))
        if key in seen:
            f = seen[key]
            return (g.dart(u, v, f), g.dart(v, u, e))
        seen[key] = e
    # simple graph: close a BFS tree with a non-tree edge
    parent_dart = {0: None}
    order = deque([0])
    while order:
        x = order.popleft()
        for d in g.incidence[x]:
            y = int(g.head[d])
            if parent_dart[x] is not None and d == parent_dart[x] ^ 1:
                continue
            if y not in parent_dart:
                parent_dart[y] = d
                order.append(y)
            else:
                return _close_cycle(g, parent_dart, d)
    raise GraphError("graph is a tree; no cycle exists")


def _close_cycle(g: Multigraph, parent_dart: dict, d: int) -> tuple[int, ...]:
    x, y = int(g.tail[d]), int(g.head[d])

    def root_path(v):
        path = [v]
        while parent_dart[v] is not None:
            v = int(g.tail[parent_dart[v]])
            path.append(v)
        return path

    px, py = root_path(x), root_path(y)
    common = set(px) & set(py)
    lca = next(v for v in px if v in common)
    down = px[: px.index(lca) + 1][::-1]  # lca ... x
    up = py[: py.index(lca) + 1]  # y ... lca
    walk = down + up
    return g.walk_to_darts(walk)
