"""The universal covering tree, handled through non-backtracking dart counts.

A vertex of the cover is a non-backtracking path from a root vertex, stored
as a tuple of darts. Regions of the cover (spheres, arcs, tubes, horocycle
pieces) are never materialised: every one of them is, at radius ``r``, the
set of darts reached after a fixed number of non-backtracking steps from a
seed multiset of darts. Pushing a count vector through the transfer
operator therefore gives how many region points project to each vertex or
edge of the graph. ``enumerate_region`` walks the tree explicitly and is
kept as an independent oracle.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Optional, Union

import numpy as np

from .graph import GraphError, Multigraph

MAX_ENUMERATION = 10**6
_INT_LIMIT = 2**62


class RegionError(ValueError):
    pass


class OracleSizeError(RuntimeError):
    pass


@dataclass(frozen=True)
class CoverPath:
    """A cover vertex: a non-backtracking path of darts starting at ``root``."""

    root: int
    darts: tuple[int, ...] = ()

    def terminal(self, g: Multigraph) -> int:
        return int(g.head[self.darts[-1]]) if self.darts else self.root

    def __len__(self) -> int:
        return len(self.darts)

    def extend(self, d: int) -> "CoverPath":
        return CoverPath(self.root, self.darts + (d,))

    def parent(self) -> "CoverPath":
        return CoverPath(self.root, self.darts[:-1])


def is_nonbacktracking(g: Multigraph, root: int, darts: tuple[int, ...]) -> bool:
    at = root
    prev = None
    for d in darts:
        if g.tail[d] != at or (prev is not None and d == prev ^ 1):
            return False
        at = int(g.head[d])
        prev = d
    return True


def tree_distance(a: CoverPath, b: CoverPath) -> int:
    if a.root != b.root:
        raise RegionError("cover paths have different roots")
    k = 0
    for x, y in zip(a.darts, b.darts):
        if x != y:
            break
        k += 1
    return len(a) + len(b) - 2 * k


@dataclass(frozen=True)
class RaySpec:
    """Geodesic ray: the prefix darts, then the cycle darts repeated forever."""

    cycle: tuple[int, ...]
    prefix: tuple[int, ...] = ()

    def darts(self, n: int) -> tuple[int, ...]:
        out = list(self.prefix[:n])
        i = 0
        while len(out) < n:
            out.append(self.cycle[i % len(self.cycle)])
            i += 1
        return tuple(out)

    def validate(self, g: Multigraph) -> None:
        if not self.cycle:
            raise RegionError("ray cycle is empty")
        start = int(g.tail[self.prefix[0]]) if self.prefix else int(g.tail[self.cycle[0]])
        probe = self.darts(len(self.prefix) + 2 * len(self.cycle) + 1)
        if not is_nonbacktracking(g, start, probe):
            raise RegionError("ray is not a non-backtracking walk (check the cycle closes and the prefix joins it)")

    def start(self, g: Multigraph) -> int:
        return int(g.tail[(self.prefix or self.cycle)[0]])


@dataclass(frozen=True)
class Sphere:
    v0: int
    r: int


@dataclass(frozen=True)
class EdgeSphere:
    v0: int
    r: int


@dataclass(frozen=True)
class Arc:
    """Arc based at the head of ``dart``, pointing away from its tail."""

    dart: int
    r: int


@dataclass(frozen=True)
class Tube:
    X: tuple[CoverPath, ...]
    r: int


@dataclass(frozen=True)
class Horocycle:
    ray: RaySpec
    r: int


Region = Union[Sphere, EdgeSphere, Arc, Tube, Horocycle]


# -- transfer operator ---------------------------------------------------------


def step(g: Multigraph, x: np.ndarray) -> np.ndarray:
    """One non-backtracking step: dart b receives everything entering tail(b) except its reverse."""
    incoming = np.zeros(g.n_vertices, dtype=x.dtype)
    np.add.at(incoming, g.head, x)
    out = incoming[g.tail] - x[np.arange(len(x)) ^ 1]
    return out


def _promote(g: Multigraph, x: np.ndarray) -> np.ndarray:
    if x.dtype != object and x.size and int(x.max()) * max(int(g.degrees.max()), 1) > _INT_LIMIT:
        return x.astype(object)
    return x


def propagate(g: Multigraph, x: np.ndarray, steps: int) -> Iterator[np.ndarray]:
    """Yield ``x``, ``T x``, ..., ``T^steps x``.

    Integer vectors switch to Python integers before they could overflow;
    float vectors are renormalised to unit sum every step.
    """
    normalise = x.dtype.kind == "f"
    if normalise:
        x = x / x.sum()
    yield x
    for _ in range(steps):
        if not normalise:
            x = _promote(g, x)
        x = step(g, x)
        if normalise:
            x = x / x.sum()
        yield x


def dart_indicator(g: Multigraph, darts, dtype=np.int64) -> np.ndarray:
    x = np.zeros(g.n_darts, dtype=dtype)
    for d in darts:
        x[d] += 1
    return x


def by_head(g: Multigraph, x: np.ndarray) -> np.ndarray:
    out = np.zeros(g.n_vertices, dtype=x.dtype)
    np.add.at(out, g.head, x)
    return out


def by_edge(g: Multigraph, x: np.ndarray) -> np.ndarray:
    return x[0::2] + x[1::2]


def _as_dict(v: np.ndarray) -> dict[int, int]:
    return {i: int(c) for i, c in enumerate(v) if c != 0}


# -- regions as seeded dart propagation ------------------------------------------


def tube_vertices_ok(g: Multigraph, X) -> None:
    if not X:
        raise RegionError("tube core X is empty")
    roots = {x.root for x in X}
    if len(roots) != 1:
        raise RegionError("tube core paths must share one root")
    members = set(X)
    for x in members:
        if not is_nonbacktracking(g, x.root, x.darts):
            raise RegionError(f"tube core path {x.darts} is backtracking")
    # a finite subtree: exactly one member has its parent outside the set
    tops = [x for x in members if len(x) == 0 or x.parent() not in members]
    if len(tops) != 1:
        raise RegionError("tube core X is not connected in the cover")


def tube_boundary(g: Multigraph, X) -> list[int]:
    """Darts of the cover edges leaving V(X), each pointing away from X."""
    tube_vertices_ok(g, X)
    members = set(X)
    out = []
    for x in sorted(members, key=lambda c: (len(c), c.darts)):
        end = x.terminal(g)
        last = x.darts[-1] if x.darts else None
        for d in g.incidence[end]:
            if last is not None and d == last ^ 1:
                continue
            if x.extend(d) not in members:
                out.append(d)
        if last is not None and x.parent() not in members:
            out.append(last ^ 1)
    return out


def region_seed(g: Multigraph, region: Region) -> tuple[list[int], int]:
    """Seed darts and the number of transfer steps for ``region``.

    Vertex regions read the heads of the resulting darts, edge regions the
    edges. Vertex spheres and tubes of radius 0 are handled by the caller.
    """
    if isinstance(region, Sphere):
        return list(g.incidence[region.v0]), region.r - 1
    if isinstance(region, EdgeSphere):
        return list(g.incidence[region.v0]), region.r
    if isinstance(region, Arc):
        return [region.dart], region.r
    if isinstance(region, Tube):
        return tube_boundary(g, region.X), region.r - 1
    if isinstance(region, Horocycle):
        region.ray.validate(g)
        return [region.ray.darts(region.r + 1)[region.r] ^ 1], region.r
    raise TypeError(f"unknown region {region!r}")


def _check_radius(region: Region) -> None:
    if region.r < 0:
        raise RegionError("radius must be non-negative")


def region_dart_counts(g: Multigraph, region: Region) -> np.ndarray:
    seed, steps = region_seed(g, region)
    x = dart_indicator(g, seed)
    for x in propagate(g, x, steps):
        pass
    return x


def sphere_counts(g: Multigraph, v0: int, r: int) -> dict[int, int]:
    """Number of cover points at distance ``r`` from a lift of ``v0``, per vertex they project to."""
    _check_radius(Sphere(v0, r))
    if r == 0:
        return {v0: 1}
    return _as_dict(by_head(g, region_dart_counts(g, Sphere(v0, r))))


def edge_sphere_counts(g: Multigraph, v0: int, r: int) -> dict[int, int]:
    _check_radius(EdgeSphere(v0, r))
    return _as_dict(by_edge(g, region_dart_counts(g, EdgeSphere(v0, r))))


def arc_counts(g: Multigraph, dart: int, r: int) -> dict[int, int]:
    _check_radius(Arc(dart, r))
    return _as_dict(by_head(g, region_dart_counts(g, Arc(dart, r))))


def tube_counts(g: Multigraph, X, r: int) -> dict[int, int]:
    """Tube of radius ``r`` around the cover subtree ``X``: a disjoint union of arcs."""
    X = tuple(X)
    _check_radius(Tube(X, r))
    if r == 0:
        tube_vertices_ok(g, X)
        return dict(Counter(x.terminal(g) for x in set(X)))
    return _as_dict(by_head(g, region_dart_counts(g, Tube(X, r))))


def horocycle_counts(g: Multigraph, ray: RaySpec, r: int) -> dict[int, int]:
    _check_radius(Horocycle(ray, r))
    return _as_dict(by_head(g, region_dart_counts(g, Horocycle(ray, r))))


def region_counts(g: Multigraph, region: Region) -> dict[int, int]:
    if isinstance(region, Sphere):
        return sphere_counts(g, region.v0, region.r)
    if isinstance(region, EdgeSphere):
        return edge_sphere_counts(g, region.v0, region.r)
    if isinstance(region, Arc):
        return arc_counts(g, region.dart, region.r)
    if isinstance(region, Tube):
        return tube_counts(g, region.X, region.r)
    if isinstance(region, Horocycle):
        return horocycle_counts(g, region.ray, region.r)
    raise TypeError(f"unknown region {region!r}")


def edge_arc_counts(g: Multigraph, dart: int, r: int) -> dict[int, int]:
    """Edge arc: the darts ``r`` steps beyond ``dart`` (radius 0 is the edge itself)."""
    return _as_dict(by_edge(g, region_dart_counts(g, Arc(dart, r))))


# -- brute-force oracle -------------------------------------------------------------


def _children(g: Multigraph, p: CoverPath) -> Iterator[CoverPath]:
    last = p.darts[-1] if p.darts else None
    for d in g.incidence[p.terminal(g)]:
        if last is None or d != last ^ 1:
            yield p.extend(d)


def _paths(g: Multigraph, root: int, length: int, prefix: tuple[int, ...] = ()) -> list[CoverPath]:
    level = [CoverPath(root, prefix)]
    for _ in range(length):
        level = [c for p in level for c in _children(g, p)]
        if len(level) > MAX_ENUMERATION:
            raise OracleSizeError("region too large to enumerate")
    return level


def _ball_around(g: Multigraph, root: int, center: CoverPath, radius: int) -> list[CoverPath]:
    """All cover points within ``radius`` of ``center``, found by pruned search from the root."""
    found = []
    stack = [CoverPath(root)]
    budget = MAX_ENUMERATION
    while stack:
        p = stack.pop()
        budget -= 1
        if budget < 0:
            raise OracleSizeError("region too large to enumerate")
        dist = tree_distance(p, center)
        if dist <= radius:
            found.append(p)
        # once p has left the root-to-center path, descendants only move further away
        on_axis = p.darts == center.darts[: len(p)]
        if on_axis or dist < radius:
            stack.extend(_children(g, p))
    return found


def enumerate_region(g: Multigraph, region: Region) -> list[CoverPath]:
    """Explicit cover points (or, for edge spheres, the path ending with each cover edge)."""
    if isinstance(region, Sphere):
        return _paths(g, region.v0, region.r)
    if isinstance(region, EdgeSphere):
        return _paths(g, region.v0, region.r + 1)
    if isinstance(region, Arc):
        # A_r = S_{r+1}(w') intersect S_r(w), rooted at w'
        tail = int(g.tail[region.dart])
        return [p for p in _paths(g, tail, region.r + 1) if tree_distance(p, CoverPath(tail, (region.dart,))) == region.r]
    if isinstance(region, Tube):
        X = tuple(region.X)
        tube_vertices_ok(g, X)
        root = X[0].root
        depth = max(len(x) for x in X) + region.r
        out = []
        for n in range(depth + 1):
            for p in _paths(g, root, n):
                if min(tree_distance(p, x) for x in X) == region.r:
                    out.append(p)
        return out
    if isinstance(region, Horocycle):
        ray = region.ray
        ray.validate(g)
        r = region.r
        root = ray.start(g)
        far = 2 * r + 2
        axis = ray.darts(far)
        v_r = CoverPath(root, axis[:r])
        v_far = CoverPath(root, axis)
        out = []
        for p in _ball_around(g, root, v_r, r):
            busemann = tree_distance(p, v_far) - far
            if tree_distance(p, v_r) == r and busemann == 0:
                out.append(p)
        return out
    raise TypeError(f"unknown region {region!r}")


def project(g: Multigraph, region: Region, paths: list[CoverPath]) -> dict[int, int]:
    """Multiset of projections: vertices, or edges for edge spheres."""
    if isinstance(region, EdgeSphere):
        return dict(Counter(p.darts[-1] // 2 for p in paths))
    return dict(Counter(p.terminal(g) for p in paths))


def parse_walk_paths(g: Multigraph, lines) -> tuple[CoverPath, ...]:
    """Cover paths from vertex walks, one walk per line, all starting at the same root."""
    out = []
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        walk = [int(t) for t in line.replace(",", " ").split()]
        darts = g.walk_to_darts(walk)
        if not is_nonbacktracking(g, walk[0], darts):
            raise RegionError(f"walk {walk} backtracks")
        out.append(CoverPath(walk[0], darts))
    if not out:
        raise RegionError("no cover paths given")
    return tuple(out)


def parse_ray(g: Multigraph, text: str) -> RaySpec:
    """Ray file: a ``cycle: v0 v1 ... vk`` line (closing edge vk->v0 implied) and an optional ``prefix:`` walk."""
    cycle: Optional[tuple[int, ...]] = None
    prefix: tuple[int, ...] = ()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(":")
        walk = [int(t) for t in rest.replace(",", " ").split()]
        if key.strip() == "cycle":
            cycle = g.walk_to_darts(walk + [walk[0]])
        elif key.strip() == "prefix":
            prefix = g.walk_to_darts(walk)
        else:
            raise RegionError(f"unknown ray line {line!r}")
    if cycle is None:
        raise RegionError("ray file needs a 'cycle:' line")
    ray = RaySpec(cycle, prefix)
    try:
        ray.validate(g)
    except GraphError as exc:
        raise RegionError(str(exc)) from exc
    return ray
