"""Laplacian spectra and the convergence rate of spherical means.

Each nonconstant Laplacian eigenvalue mu produces a linear recursion for the
sphere averages of its eigenfunction; the roots of the characteristic
polynomial give the per-eigenvalue decay rate, and the overall rate ``beta``
is the largest of them.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .graph import GraphError, Multigraph, NotSimpleError, classify, line_graph

D_ZERO_TOL = 1e-9
MU_TOL = 1e-9
MERGE_TOL = 1e-8
DEFAULT_EPSILON = 0.01

DNEG, DZERO, DPOS = "Dneg", "Dzero", "Dpos"
CONSTANT, DEGENERATE = "constant", "degenerate-excluded"


class HypothesisError(ValueError):
    """Input violates the assumptions under which a rate is defined."""


@dataclass(frozen=True)
class EigenRecord:
    mu: float
    multiplicity: int
    discriminant: Optional[float]
    case: str
    rate: Optional[float]

    @property
    def included(self) -> bool:
        return self.rate is not None


@dataclass(frozen=True)
class SpectralReport:
    operator: str
    records: tuple[EigenRecord, ...]
    beta: Optional[float]
    epsilon: float
    spectral_gap: float
    params: dict = field(default_factory=dict)
    forbidden_interval: Optional[tuple[float, float]] = None

    @property
    def eigenvalues(self) -> list[float]:
        """All eigenvalues, descending, with multiplicity."""
        return [r.mu for r in self.records for _ in range(r.multiplicity)]

    def to_dict(self) -> dict:
        return {
            "operator": self.operator,
            "params": dict(self.params),
            "epsilon": self.epsilon,
            "beta": self.beta,
            "spectral_gap": self.spectral_gap,
            "forbidden_interval": list(self.forbidden_interval) if self.forbidden_interval else None,
            "eigenvalues": [
                {
                    "mu": r.mu,
                    "multiplicity": r.multiplicity,
                    "discriminant": r.discriminant,
                    "case": r.case,
                    "rate": r.rate,
                }
                for r in self.records
            ],
        }


def vertex_laplacian(g: Multigraph) -> np.ndarray:
    """Row-normalised adjacency: ``L[v, w] = mult(v, w) / d(v)``.

    Symmetric exactly when ``g`` is regular.
    """
    a = g.adjacency_matrix()
    return a / g.degrees[:, None]


def edge_laplacian(g: Multigraph) -> np.ndarray:
    """Vertex Laplacian of the line graph, indexed by edge id."""
    if not g.is_simple:
        raise NotSimpleError("edge Laplacian requires a simple graph")
    return vertex_laplacian(line_graph(g))


def laplacian_spectrum(lap: np.ndarray, degrees: Optional[np.ndarray] = None) -> np.ndarray:
    """Eigenvalues of a (row-normalised) Laplacian, descending.

    ``D^-1 A`` is similar to the symmetric ``D^-1/2 A D^-1/2``; pass the
    degrees to symmetrise non-regular inputs.
    """
    if degrees is not None:
        s = np.sqrt(degrees.astype(float))
        lap = (lap * s[:, None]) / s[None, :]
    lap = (lap + lap.T) / 2
    return np.sort(np.linalg.eigvalsh(lap))[::-1]


def eigendecomposition(lap: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal eigenpairs of a symmetric Laplacian, eigenvalues descending.

    Raises if the reconstruction residual exceeds 1e-9.
    """
    if not np.allclose(lap, lap.T, atol=1e-12):
        raise ValueError("Laplacian is not symmetric (graph not regular)")
    w, v = np.linalg.eigh(lap)
    order = np.argsort(w)[::-1]
    w, v = w[order], v[:, order]
    residual = np.max(np.abs(v @ np.diag(w) @ v.T - lap))
    if residual > 1e-9:
        raise ArithmeticError(f"eigendecomposition residual {residual:.3g} too large")
    return w, v


def merge_eigenvalues(mus: Sequence[float], tol: float = MERGE_TOL) -> list[tuple[float, int]]:
    """Group sorted eigenvalues into (value, multiplicity) clusters."""
    groups: list[list[float]] = []
    for mu in sorted(mus, reverse=True):
        if groups and abs(groups[-1][-1] - mu) <= tol:
            groups[-1].append(mu)
        else:
            groups.append([mu])
    return [(float(np.mean(grp)), len(grp)) for grp in groups]


def _case(disc: float) -> str:
    if abs(disc) < D_ZERO_TOL:
        return DZERO
    return DNEG if disc < 0 else DPOS


def _gap(records) -> float:
    rest = [abs(r.mu) for r in records if r.included]
    return 1.0 - max(rest) if rest else 1.0


def vertex_roots(mu: float, q: int) -> tuple[complex, complex]:
    """Roots of t^2 - (q+1)/q mu t + 1/q."""
    disc = (q + 1) ** 2 * mu**2 - 4 * q
    s = cmath.sqrt(disc)
    return ((q + 1) * mu + s) / (2 * q), ((q + 1) * mu - s) / (2 * q)


def edge_roots(mu: float, q: int) -> tuple[complex, complex]:
    """Roots of t^2 + (q-1-2 mu q)/q t + 1/q."""
    disc = (q - 1 - 2 * mu * q) ** 2 - 4 * q
    s = cmath.sqrt(disc)
    c = mu - (q - 1) / (2 * q)
    return c + s / (2 * q), c - s / (2 * q)


def transfer_matrix(mu: float, p: int, q: int) -> np.ndarray:
    """Two-radius step for semiregular edge radialisations centred on a degree-(p+1) vertex."""
    a = p - 1 - mu * (p + q)
    b = q - 1 - mu * (p + q)
    return np.array([[(a * b - p) / (p * q), a / (p * q)], [-b / p, -1.0 / p]])


def semiregular_discriminant(mu: float, p: int, q: int) -> float:
    a = p - 1 - mu * (p + q)
    b = q - 1 - mu * (p + q)
    return (a * b - p - q) ** 2 - 4 * p * q


def semiregular_roots(mu: float, p: int, q: int) -> tuple[complex, complex]:
    a = p - 1 - mu * (p + q)
    b = q - 1 - mu * (p + q)
    s = cmath.sqrt(semiregular_discriminant(mu, p, q))
    return (a * b - p - q + s) / (2 * p * q), (a * b - p - q - s) / (2 * p * q)


def _rate(case: str, roots, floor: float, epsilon: float, base: float) -> float:
    if case == DNEG:
        return floor
    if case == DZERO:
        return base ** (-0.5 + epsilon)
    return max(abs(roots[0]), abs(roots[1]))


def beta_vertex_regular(mus: Sequence[float], q: int, epsilon: float = DEFAULT_EPSILON) -> SpectralReport:
    """Rate for vertex functions on a nonbipartite (q+1)-regular graph."""
    if q < 2:
        raise HypothesisError("vertex rate needs degree q+1 >= 3")
    if min(mus) < -1 + MU_TOL:
        raise HypothesisError("eigenvalue -1 present: graph is bipartite; analyse the squared graph instead")
    records = []
    for mu, mult in merge_eigenvalues(mus):
        if abs(mu - 1) < MU_TOL:
            records.append(EigenRecord(mu, mult, None, CONSTANT, None))
            continue
        disc = (q + 1) ** 2 * mu**2 - 4 * q
        case = _case(disc)
        rate = _rate(case, vertex_roots(mu, q), q**-0.5, epsilon, q)
        records.append(EigenRecord(mu, mult, disc, case, rate))
    return _report("vertex", records, epsilon, {"q": q})


def beta_edge_regular(mus: Sequence[float], q: int, epsilon: float = DEFAULT_EPSILON) -> SpectralReport:
    """Rate for edge functions on a simple regular graph with edge degree 2q."""
    if q < 2:
        raise HypothesisError("edge rate needs edge degree 2q >= 4")
    records = []
    for mu, mult in merge_eigenvalues(mus):
        if abs(mu - 1) < MU_TOL:
            records.append(EigenRecord(mu, mult, None, CONSTANT, None))
            continue
        disc = (q - 1 - 2 * mu * q) ** 2 - 4 * q
        if abs(mu + 1 / q) < MU_TOL:
            # radialisation vanishes identically on this eigenspace
            records.append(EigenRecord(mu, mult, disc, DEGENERATE, None))
            continue
        case = _case(disc)
        rate = _rate(case, edge_roots(mu, q), q**-0.5, epsilon, q)
        records.append(EigenRecord(mu, mult, disc, case, rate))
    return _report("edge", records, epsilon, {"q": q})


def forbidden_interval(p: int, q: int) -> tuple[float, float]:
    lo, hi = sorted((p - 1, q - 1))
    return lo / (p + q), hi / (p + q)


def beta_edge_semiregular(
    mus: Sequence[float], p: int, q: int, epsilon: float = DEFAULT_EPSILON
) -> SpectralReport:
    """Per-radius rate for edge functions on a simple (p+1, q+1)-semiregular graph.

    The transfer matrix advances two radii per step, so each rate is the
    square root of the largest modulus of its eigenvalues.
    """
    if p < 2 or q < 2:
        raise HypothesisError("semiregular edge rate needs p, q >= 2")
    lo, hi = forbidden_interval(p, q)
    records = []
    for mu, mult in merge_eigenvalues(mus):
        if abs(mu - 1) < MU_TOL:
            records.append(EigenRecord(mu, mult, None, CONSTANT, None))
            continue
        disc = semiregular_discriminant(mu, p, q)
        if abs(mu + 2 / (p + q)) < MU_TOL:
            records.append(EigenRecord(mu, mult, disc, DEGENERATE, None))
            continue
        if lo + MERGE_TOL < mu < hi - MERGE_TOL:
            raise ArithmeticError(f"eigenvalue {mu} lies in the forbidden interval ({lo}, {hi})")
        case = _case(disc)
        if case == DNEG:
            rate = (p * q) ** -0.25
        elif case == DZERO:
            rate = (p * q) ** (-0.25 + epsilon)
        else:
            t1, t2 = semiregular_roots(mu, p, q)
            rate = math.sqrt(max(abs(t1), abs(t2)))
        records.append(EigenRecord(mu, mult, disc, case, rate))
    return _report("edge", records, epsilon, {"p": p, "q": q}, (lo, hi))


def _report(operator, records, epsilon, params, interval=None) -> SpectralReport:
    rates = [r.rate for r in records if r.included]
    beta = max(rates) if rates else None
    return SpectralReport(operator, tuple(records), beta, epsilon, _gap(records), params, interval)


def is_ramanujan(g: Multigraph, tol: float = 1e-9) -> bool:
    deg = g.degrees
    if not np.all(deg == deg[0]):
        raise HypothesisError("Ramanujan property is defined for regular graphs")
    k = int(deg[0])
    q = k - 1
    lam = np.linalg.eigvalsh(g.adjacency_matrix())
    nontrivial = lam[np.abs(np.abs(lam) - k) > tol]
    return bool(np.all(np.abs(nontrivial) <= 2 * math.sqrt(q) + tol))


@dataclass(frozen=True)
class CharPolyCheck:
    p: int
    q: int
    n1: int
    n2: int
    m: int
    interval: tuple[float, float]
    holds: bool
    offending: tuple[float, ...]
    residuals: tuple[float, ...]

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else 0.0


def line_charpoly_residual(x: float, graph_eigs: np.ndarray, p: int, q: int, n1: int, n2: int, m: int) -> float:
    """Relative size of the line-graph characteristic polynomial of a semiregular graph at ``x``.

    Uses the factorisation through the characteristic polynomial of the graph
    itself. The ``(-a1/a2)^(n1-n2)`` factor is cancelled against the
    ``n1 - n2`` structural zero eigenvalues, so the expression stays finite
    at ``x = q - 1``. Each factor is divided by a matching magnitude scale,
    making the result ~1 away from roots and ~0 at roots.
    """
    a1 = x - p + 1
    a2 = x - q + 1
    s = a1 * a2
    k = n1 - n2
    eigs = np.sort(np.abs(graph_eigs))
    rest = eigs[k:]
    num = abs(x + 2) ** m * abs(a1) ** k
    den = (abs(x) + 2) ** m * (abs(x) + p + 1) ** k
    terms = np.abs(rest**2 - s) / (rest**2 + abs(s) + 1)
    return float(num / den * math.sqrt(np.prod(terms)))


def check_gap_lemma(g: Multigraph, tol: float = 1e-8) -> CharPolyCheck:
    """No edge-Laplacian eigenvalue of a semiregular graph lies strictly inside the gap interval."""
    cls = classify(g)
    if cls.semiregular_pq is None:
        raise HypothesisError("graph is not semiregular")
    if not g.is_simple:
        raise NotSimpleError("gap lemma requires a simple graph")
    p, q = cls.semiregular_pq
    part1, part2 = cls.bipartite_parts
    n1, n2 = len(part1), len(part2)
    if n1 < n2:
        n1, n2 = n2, n1
    lo, hi = forbidden_interval(p, q)
    mus = laplacian_spectrum(edge_laplacian(g))
    offending = tuple(float(mu) for mu in mus if lo + tol < mu < hi - tol)
    graph_eigs = np.linalg.eigvalsh(g.adjacency_matrix())
    m = g.n_edges - g.n_vertices
    residuals = tuple(
        line_charpoly_residual(float(mu * (p + q)), graph_eigs, p, q, n1, n2, m) for mu in mus
    )
    return CharPolyCheck(p, q, n1, n2, m, (lo, hi), not offending, offending, residuals)


def analyze(g: Multigraph, operator: str = "vertex", epsilon: float = DEFAULT_EPSILON) -> SpectralReport:
    """Route ``g`` to the applicable rate computation by its classification."""
    cls = classify(g)
    if operator == "vertex":
        if cls.regular_q is None:
            raise HypothesisError("vertex rate requires a regular graph")
        if cls.bipartite:
            raise HypothesisError("vertex rate requires a nonbipartite graph; analyse the squared graph instead")
        mus = laplacian_spectrum(vertex_laplacian(g))
        return beta_vertex_regular(mus, cls.regular_q, epsilon)
    if operator == "edge":
        if not g.is_simple:
            raise NotSimpleError("edge rate requires a simple graph")
        mus = laplacian_spectrum(edge_laplacian(g))
        if cls.regular_q is not None:
            return beta_edge_regular(mus, cls.regular_q, epsilon)
        if cls.semiregular_pq is not None:
            p, q = cls.semiregular_pq
            return beta_edge_semiregular(mus, p, q, epsilon)
        raise HypothesisError("edge rate requires a regular or semiregular graph")
    raise ValueError(f"unknown operator {operator!r}")
