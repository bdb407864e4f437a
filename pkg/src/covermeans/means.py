"""Means of lifted functions over cover regions, and eigenfunction radialisations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import cover
from .cover import Arc, EdgeSphere, Horocycle, Region, RegionError, Sphere, Tube
from .graph import Multigraph, NotBipartiteError, classify, squared_graph

VERTEX_KINDS = ("sphere", "arc", "tube", "horocycle")
EDGE_KINDS = ("sphere", "edgesphere", "arc", "tube")


@dataclass(frozen=True)
class MeanSeries:
    kind: str
    on: str
    base: object
    values: tuple
    target: object

    @property
    def errors(self) -> np.ndarray:
        return np.array([abs(float(m) - float(self.target)) for m in self.values])

    def __len__(self) -> int:
        return len(self.values)


def graph_average(values, exact: bool = False):
    if exact:
        vals = [Fraction(v) for v in values]
        return sum(vals, Fraction(0)) / len(vals)
    return float(np.mean(np.asarray(values, dtype=float)))


def _check_function(g: Multigraph, values, on: str) -> None:
    n = g.n_vertices if on == "vertices" else g.n_edges
    if len(values) != n:
        raise ValueError(f"function has {len(values)} values, graph has {n} {on}")
    if on not in ("vertices", "edges"):
        raise ValueError(f"on must be 'vertices' or 'edges', not {on!r}")


def _weighted(counts, values, exact: bool):
    total = sum(int(c) for c in counts)
    if total == 0:
        raise RegionError("empty region")
    if exact:
        num = sum((int(c) * Fraction(values[i]) for i, c in enumerate(counts) if c), Fraction(0))
        return num / total
    w = np.asarray(counts, dtype=float)
    return float(w @ np.asarray(values, dtype=float) / w.sum())


def region_mean(g: Multigraph, values, region: Region, on: str = "vertices", exact: bool = False):
    """Average of the lifted function over ``region``, each cover point weighted once.

    For ``on="edges"`` a Sphere is read as the edge sphere, an Arc as the
    edge arc (radius 0 being the arc's own edge) and a Tube as the cover
    edges whose endpoint nearer to X is at distance ``r`` from it.
    """
    _check_function(g, values, on)
    if on == "vertices":
        if isinstance(region, EdgeSphere):
            raise RegionError("edge spheres carry edge functions")
        counts = cover.region_counts(g, region)
        dense = [counts.get(i, 0) for i in range(g.n_vertices)]
        return _weighted(dense, values, exact)
    x = _edge_dart_counts(g, region)
    return _weighted(cover.by_edge(g, x), values, exact)


def _edge_dart_counts(g: Multigraph, region: Region) -> np.ndarray:
    if isinstance(region, Sphere):
        region = EdgeSphere(region.v0, region.r)
    if isinstance(region, Tube):
        seed = cover.tube_boundary(g, region.X)
        x = cover.dart_indicator(g, seed)
        for x in cover.propagate(g, x, region.r):
            pass
        return x
    if isinstance(region, Horocycle):
        raise RegionError("horocycle pieces are defined for vertex functions only")
    return cover.region_dart_counts(g, region)


def _family_seed(g: Multigraph, kind: str, base, on: str) -> tuple[list[int], int]:
    """Seed darts and step offset so that radius r is reached after r + offset steps."""
    if kind in ("sphere", "edgesphere"):
        darts = list(g.incidence[base])
        return darts, (-1 if on == "vertices" else 0)
    if kind == "arc":
        return [base], 0
    if kind == "tube":
        return cover.tube_boundary(g, tuple(base)), (-1 if on == "vertices" else 0)
    raise ValueError(f"unknown region kind {kind!r}")


def _radius_zero(g: Multigraph, kind: str, base):
    if kind == "sphere":
        return {base: 1}
    return cover.tube_counts(g, tuple(base), 0)


def family_counts(g: Multigraph, kind: str, base, rmax: int, on: str = "vertices", exact: bool = True):
    """Yield, for r = 0..rmax, the projection weights of the radius-r region.

    Exact mode yields integer counts; otherwise unit-sum float weights.
    """
    n = g.n_vertices if on == "vertices" else g.n_edges
    if kind == "horocycle":
        if on != "vertices":
            raise RegionError("horocycle pieces are defined for vertex functions only")
        for r in range(rmax + 1):
            c = cover.horocycle_counts(g, base, r)
            w = np.array([c.get(i, 0) for i in range(n)], dtype=np.int64 if exact else float)
            yield w if exact else w / w.sum()
        return
    seed, offset = _family_seed(g, kind, base, on)
    read = cover.by_head if on == "vertices" else cover.by_edge
    steps = rmax + offset
    if offset < 0:
        zero = _radius_zero(g, kind, base)
        w = np.array([zero.get(i, 0) for i in range(n)], dtype=np.int64 if exact else float)
        yield w if exact else w / w.sum()
    if steps < 0:
        return
    x0 = cover.dart_indicator(g, seed, dtype=np.int64 if exact else float)
    for x in cover.propagate(g, x0, steps):
        yield read(g, x)


def family_weights(g: Multigraph, kind: str, base, rmax: int, on: str = "vertices") -> np.ndarray:
    """Row r holds the normalised projection weights of the radius-r region.

    ``W @ f`` is the whole mean series of ``f``, which is how many functions
    are handled at once.
    """
    if kind == "edgesphere":
        kind, on = "sphere", "edges"
    return np.array(list(family_counts(g, kind, base, rmax, on, exact=False)))


def mean_series(
    g: Multigraph,
    values,
    kind: str,
    base,
    rmax: int,
    on: str = "vertices",
    exact: bool = False,
) -> MeanSeries:
    """Means over a growing region family for r = 0..rmax in one transfer sweep.

    ``base`` is a vertex (sphere), a dart (arc), a tuple of CoverPaths (tube)
    or a RaySpec (horocycle). Double mode renormalises the dart vector each
    step, so long series never overflow.
    """
    if kind == "edgesphere":
        kind, on = "sphere", "edges"
    _check_function(g, values, on)
    if rmax < 0:
        raise ValueError("rmax must be non-negative")
    target = graph_average(values, exact)
    if exact:
        out = [_weighted(w, values, True) for w in family_counts(g, kind, base, rmax, on, exact=True)]
    else:
        out = (family_weights(g, kind, base, rmax, on) @ np.asarray(values, dtype=float)).tolist()
    return MeanSeries(kind, on, base, tuple(out), target)


# -- radialisation -------------------------------------------------------------------


def vertex_recursion(F0: float, F1: float, mu: float, q: int, nmax: int) -> np.ndarray:
    F = [F0, F1]
    while len(F) <= nmax:
        F.append((q + 1) / q * mu * F[-1] - F[-2] / q)
    return np.array(F[: nmax + 1])


def edge_recursion(F0: float, F1: float, mu: float, q: int, nmax: int) -> np.ndarray:
    F = [F0, F1]
    while len(F) <= nmax:
        F.append(-(q - 1 - 2 * mu * q) / q * F[-1] - F[-2] / q)
    return np.array(F[: nmax + 1])


def semiregular_recursion(F0: float, F1: float, mu: float, p: int, q: int, nmax: int) -> np.ndarray:
    """Iterate (F(2k+1), F(2k)) = A (F(2k-1), F(2k-2)); p is the centre's degree minus one."""
    from .spectral import transfer_matrix

    A = transfer_matrix(mu, p, q)
    F = [F0, F1]
    state = np.array([F1, F0])
    while len(F) <= nmax:
        state = A @ state
        F.extend([state[1], state[0]])
    return np.array(F[: nmax + 1])


def recursion_residuals(F: Sequence[float], mu: float, mode: str, p: int, q: int) -> np.ndarray:
    """Residuals of the sphere recursion for ``mode`` in vertex / edge / semiregular.

    For the semiregular mode, ``p + 1`` is the degree of the centre vertex.
    """
    F = np.asarray(F, dtype=float)
    if mode == "vertex":
        return F[2:] - (q + 1) / q * mu * F[1:-1] + F[:-2] / q
    if mode == "edge":
        return F[2:] + (q - 1 - 2 * mu * q) / q * F[1:-1] + F[:-2] / q
    if mode == "semiregular":
        from .spectral import transfer_matrix

        A = transfer_matrix(mu, p, q)
        res = []
        for k in range(1, (len(F) - 1) // 2 + 1):
            if 2 * k + 1 >= len(F):
                break
            pred = A @ np.array([F[2 * k - 1], F[2 * k - 2]])
            res.extend([F[2 * k + 1] - pred[0], F[2 * k] - pred[1]])
        return np.array(res)
    raise ValueError(f"unknown mode {mode!r}")


def radialization_mode(g: Multigraph, v0: int, on: str) -> tuple[str, int, int]:
    """Pick the recursion for the sphere radialisation of an eigenfunction around ``v0``."""
    cls = classify(g)
    if on == "vertices":
        if cls.regular_q is None:
            raise ValueError("vertex radialisation recursion needs a regular graph")
        return "vertex", cls.regular_q, cls.regular_q
    if not g.is_simple:
        raise ValueError("edge radialisation needs a simple graph")
    if cls.regular_q is not None:
        return "edge", cls.regular_q, cls.regular_q
    if cls.semiregular_pq is not None:
        p, q = cls.semiregular_pq
        # centred on the other part: swap the roles of p and q
        if g.degree(v0) != p + 1:
            p, q = q, p
        return "semiregular", p, q
    raise ValueError("edge radialisation needs a regular or semiregular graph")


def radialization(
    g: Multigraph, phi, mu: float, v0: int, nmax: int, on: str = "vertices", tol: float = 1e-9
) -> np.ndarray:
    """Sphere averages F(0..nmax) of the lift of eigenfunction ``phi``.

    Computed from the cover spheres and cross-checked against the linear
    recursion seeded with F(0), F(1); raises if they disagree beyond ``tol``.
    """
    from .spectral import edge_laplacian, vertex_laplacian

    phi = np.asarray(phi, dtype=float)
    lap = vertex_laplacian(g) if on == "vertices" else edge_laplacian(g)
    if np.max(np.abs(lap @ phi - mu * phi)) > 1e-8:
        raise ValueError("phi is not an eigenfunction for mu")
    F = np.array(mean_series(g, phi, "sphere", v0, max(nmax, 1), on).values)
    mode, p, q = radialization_mode(g, v0, on)
    if mode == "vertex":
        R = vertex_recursion(F[0], F[1], mu, q, nmax)
    elif mode == "edge":
        R = edge_recursion(F[0], F[1], mu, q, nmax)
    else:
        R = semiregular_recursion(F[0], F[1], mu, p, q, nmax)
    gap = np.max(np.abs(F[: nmax + 1] - R))
    if gap > tol:
        raise ArithmeticError(f"sphere radialisation and recursion differ by {gap:.3g}")
    return F[: nmax + 1]


def bipartite_even_limits(g: Multigraph, values, v0: Optional[int] = None) -> tuple[float, float]:
    """Limits of even-radius sphere means for a base in the first and in the second part.

    Each is the average of the function over the corresponding squared graph,
    which is regular, so it is the plain average over that part. The first
    part holds the degree-(p+1) vertices (vertex 0's part if regular).
    ``v0`` is accepted for symmetry with the other means and only validated.
    """
    cls = classify(g)
    if cls.bipartite_parts is None:
        raise NotBipartiteError("even-radius limits need a bipartite graph")
    if v0 is not None and not 0 <= v0 < g.n_vertices:
        raise ValueError("v0 out of range")
    vals = np.asarray(values, dtype=float)
    limits = []
    for part in (1, 2):
        gp, ids = squared_graph(g, part)
        deg = gp.degrees
        if not np.all(deg == deg[0]):
            raise ArithmeticError("squared graph is not regular")
        limits.append(float(np.mean(vals[list(ids)])))
    return limits[0], limits[1]
