"""Empirical convergence rates and certification of the geometric bounds."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .graph import Multigraph, classify
from .means import MeanSeries, family_weights, graph_average
from .spectral import (
    DEFAULT_EPSILON,
    HypothesisError,
    SpectralReport,
    analyze,
    edge_laplacian,
    eigendecomposition,
    vertex_laplacian,
)

RATE_TOL = 0.05
STABILITY_TOL = 0.05
MIN_FIT_POINTS = 5


class FitError(ValueError):
    pass


@dataclass(frozen=True)
class RateFit:
    r_min: int
    r_max: int
    slope: float
    rate: float
    r_squared: float
    n_points: int
    noise_floor: float


def error_envelope(errors) -> np.ndarray:
    """Tail supremum sup_{s >= r} |M_s - avg|: monotone, and bounded by C beta^r iff the errors are."""
    errors = np.asarray(errors, dtype=float)
    return np.maximum.accumulate(errors[::-1])[::-1]


def fit_rate(
    series: MeanSeries | Sequence[float],
    noise_floor: Optional[float] = None,
    window: tuple[int, Optional[int]] = (0, None),
    target: Optional[float] = None,
    norm2: float = 1.0,
    method: str = "envelope",
) -> RateFit:
    """Least-squares fit of the log error against r inside ``window``; rate = exp(slope).

    ``method="raw"`` fits ln|M_r - avg| directly. The default fits the log of
    the tail supremum of the errors instead: with complex characteristic
    roots the raw errors oscillate like beta^r |cos(r theta + phi)| and the
    dips of the cosine skew a short fit, while the envelope decays at the
    same rate without the dips. The envelope is taken over the whole series,
    so pass more radii than the window covers.

    Points at or below the noise floor (default 1e-12 * norm2) are dropped.
    A plain sequence is read as the errors themselves unless ``target`` is given.
    """
    if isinstance(series, MeanSeries):
        err = series.errors
    else:
        vals = np.asarray(series, dtype=float)
        err = np.abs(vals - target) if target is not None else np.abs(vals)
    if len(err) < 8:
        raise FitError("need at least 8 terms to fit a rate")
    if method == "envelope":
        err = error_envelope(err)
    elif method != "raw":
        raise ValueError(f"unknown fit method {method!r}")
    floor = 1e-12 * norm2 if noise_floor is None else noise_floor
    lo, hi = window
    hi = len(err) - 1 if hi is None else min(hi, len(err) - 1)
    r = np.arange(lo, hi + 1)
    e = err[lo : hi + 1]
    keep = e > floor
    r, e = r[keep], e[keep]
    if len(r) < MIN_FIT_POINTS or r[-1] - r[0] < 4:
        raise FitError("fewer than 5 usable points above the noise floor")
    y = np.log(e)
    slope, intercept = np.polyfit(r, y, 1)
    resid = y - (slope * r + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return RateFit(int(r[0]), int(r[-1]), float(slope), float(np.exp(slope)), r2, len(r), floor)


@dataclass(frozen=True)
class BoundCertificate:
    c_emp: float
    c_half: float
    holds: bool


def bound_constant(errors, beta: float, norm2: float) -> float:
    errors = np.asarray(errors, dtype=float)
    if norm2 == 0:
        return 0.0
    r = np.arange(len(errors))
    return float(np.max(errors / (norm2 * beta**r)))


def certify_bound(series, beta: float, norm2: float, tol: float = STABILITY_TOL) -> BoundCertificate:
    """Smallest C with |M_r - avg| <= C norm2 beta^r, and whether it is stable.

    ``series`` is one MeanSeries or several (e.g. one per base point); C is
    the maximum over all of them. Stability compares C over the first half
    of the radii with C over all radii: a rate that is too small makes C
    keep growing.
    """
    if not 0 < beta < 1:
        raise ValueError("beta must lie in (0, 1)")
    group = [series] if isinstance(series, MeanSeries) else list(series)
    c_full = max(bound_constant(s.errors, beta, norm2) for s in group)
    half = (len(group[0]) - 1) // 2
    c_half = max(bound_constant(s.errors[: half + 1], beta, norm2) for s in group)
    holds = c_full <= (1 + tol) * c_half if c_half > 0 else c_full == 0
    return BoundCertificate(c_full, c_half, bool(holds))


@dataclass(frozen=True)
class RadializationState:
    index: int
    mu: float
    coefficient: float
    F0: float
    F1: float
    case: str


def eigenbasis(g: Multigraph, on: str = "vertices") -> tuple[np.ndarray, np.ndarray]:
    lap = vertex_laplacian(g) if on == "vertices" else edge_laplacian(g)
    return eigendecomposition(lap)


def radialization_states(g: Multigraph, values, v0: int, on: str = "vertices", report: Optional[SpectralReport] = None):
    """Per-eigenfunction initial data (F(0), F(1)) at ``v0`` together with the coefficients of ``values``."""
    mus, phis = eigenbasis(g, on)
    W = family_weights(g, "sphere", v0, 1, on)
    F = W @ phis
    coeffs = phis.T @ np.asarray(values, dtype=float)
    cases = {}
    if report is not None:
        for rec in report.records:
            cases[round(rec.mu, 7)] = rec.case
    out = []
    for i, mu in enumerate(mus):
        out.append(RadializationState(i, float(mu), float(coeffs[i]), float(F[0, i]), float(F[1, i]), cases.get(round(mu, 7), "")))
    return out


@dataclass
class CrossCheckReport:
    theorem: int
    graph: dict
    beta: float
    epsilon: float
    rmax: int
    seed: Optional[int]
    trials: int
    window: tuple[int, int]
    c_by_base: dict = field(default_factory=dict)
    c_emp: float = 0.0
    c_half: float = 0.0
    bound_holds: bool = False
    max_rate: float = 0.0
    rates: list = field(default_factory=list)
    rate_ok: bool = False
    max_raw_rate: float = 0.0
    skipped_fits: int = 0
    passed: bool = False
    failures: list = field(default_factory=list)
    spectrum: Optional[dict] = None

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "graph": self.graph,
            "beta": self.beta,
            "epsilon": self.epsilon,
            "rmax": self.rmax,
            "seed": self.seed,
            "trials": self.trials,
            "fit_window": list(self.window),
            "c_emp": self.c_emp,
            "c_emp_half": self.c_half,
            "c_by_base": {str(k): v for k, v in sorted(self.c_by_base.items())},
            "bound_holds": self.bound_holds,
            "max_fitted_rate": self.max_rate,
            "rate_tolerance": RATE_TOL,
            "rate_ok": self.rate_ok,
            "max_raw_fitted_rate": self.max_raw_rate,
            "skipped_fits": self.skipped_fits,
            "fitted_rates": self.rates,
            "passed": self.passed,
            "failures": self.failures,
            "spectrum": self.spectrum,
        }


def theorem_spectrum(g: Multigraph, theorem: int, epsilon: float = DEFAULT_EPSILON) -> SpectralReport:
    """Check the hypotheses of theorem 1, 2 or 3 and return its spectral rate report."""
    cls = classify(g)
    if theorem == 1:
        if cls.regular_q is None or cls.bipartite or cls.regular_q < 2:
            raise HypothesisError("theorem 1 needs a nonbipartite regular graph of degree >= 3")
        return analyze(g, "vertex", epsilon)
    if theorem == 2:
        if cls.regular_q is None or not g.is_simple or cls.regular_q < 2:
            raise HypothesisError("theorem 2 needs a simple regular graph with edge degree >= 4")
        return analyze(g, "edge", epsilon)
    if theorem == 3:
        if cls.semiregular_pq is None or not g.is_simple:
            raise HypothesisError("theorem 3 needs a simple semiregular graph")
        p, q = cls.semiregular_pq
        if p < 2 or q < 2:
            raise HypothesisError(f"theorem 3 needs p, q >= 2 (got p={p}, q={q})")
        from .spectral import beta_edge_semiregular, laplacian_spectrum

        mus = laplacian_spectrum(edge_laplacian(g))
        return beta_edge_semiregular(mus, p, q, epsilon)
    raise ValueError("theorem must be 1, 2 or 3")


def random_functions(n: int, trials: int, seed: int) -> np.ndarray:
    """Seeded uniform [-1, 1] functions, one per column; the mean is left in."""
    rng = np.random.default_rng(seed)
    return rng.uniform(-1.0, 1.0, size=(n, trials))


def check_family(
    weights_by_base: dict,
    functions: np.ndarray,
    beta: float,
    window: tuple[int, int],
) -> tuple[dict, float, float, list, list]:
    """Bound constants per base and fitted rates for every (base, function) pair.

    ``weights_by_base`` maps a base label to a weight matrix with 2R+1 rows;
    the fit uses ``window`` and the stability check compares R with 2R.
    Returns (C per base, C overall, C over the first half, envelope rates, raw rates).
    """
    norms = np.linalg.norm(functions, axis=0)
    avg = functions.mean(axis=0)
    c_by_base = {}
    c_half = 0.0
    rates = []
    raw_rates = []
    for base, W in weights_by_base.items():
        M = W @ functions
        errs = np.abs(M - avg[None, :])
        half = (W.shape[0] - 1) // 2
        r = np.arange(W.shape[0])[:, None]
        ratio = errs / (norms[None, :] * beta**r)
        c_by_base[base] = float(ratio.max())
        c_half = max(c_half, float(ratio[: half + 1].max()))
        for j in range(functions.shape[1]):
            try:
                rates.append(fit_rate(errs[:, j], window=window, norm2=norms[j]).rate)
                raw_rates.append(fit_rate(errs[:, j], window=window, norm2=norms[j], method="raw").rate)
            except FitError:
                continue
    c_emp = max(c_by_base.values())
    return c_by_base, c_emp, c_half, rates, raw_rates


def cross_check_theorem(
    g: Multigraph,
    theorem: int,
    functions: Optional[np.ndarray] = None,
    trials: int = 50,
    seed: int = 0,
    rmax: int = 20,
    epsilon: float = DEFAULT_EPSILON,
    fit_start: int = 4,
    graph_info: Optional[dict] = None,
) -> CrossCheckReport:
    """Run the full chain for one theorem: rate from the spectrum, sphere means from every
    base vertex, fitted decay rates and the certified bound constant."""
    report = theorem_spectrum(g, theorem, epsilon)
    beta = report.beta
    on = "vertices" if theorem == 1 else "edges"
    n = g.n_vertices if on == "vertices" else g.n_edges
    if functions is None:
        functions = random_functions(n, trials, seed)
        used_seed: Optional[int] = seed
    else:
        functions = np.asarray(functions, dtype=float)
        if functions.ndim == 1:
            functions = functions[:, None]
        used_seed = None
    weights = {v: family_weights(g, "sphere", v, 2 * rmax, on) for v in range(g.n_vertices)}
    window = (fit_start, rmax)
    c_by_base, c_emp, c_half, rates, raw_rates = check_family(weights, functions, beta, window)
    out = CrossCheckReport(
        theorem=theorem,
        graph=graph_info or {"n_vertices": g.n_vertices, "n_edges": g.n_edges},
        beta=beta,
        epsilon=epsilon,
        rmax=rmax,
        seed=used_seed,
        trials=functions.shape[1],
        window=window,
        spectrum=report.to_dict(),
    )
    out.c_by_base = c_by_base
    out.c_emp = c_emp
    out.c_half = c_half
    out.bound_holds = c_emp <= (1 + STABILITY_TOL) * c_half if c_half > 0 else c_emp == 0
    out.rates = rates
    out.max_raw_rate = max(raw_rates) if raw_rates else 0.0
    out.skipped_fits = len(weights) * functions.shape[1] - len(rates)
    out.max_rate = max(rates) if rates else 0.0
    out.rate_ok = out.max_rate <= beta * (1 + RATE_TOL)
    if not out.bound_holds:
        out.failures.append(f"bound constant not stable: C(R)={c_half:.6g}, C(2R)={c_emp:.6g}")
    if not out.rate_ok:
        out.failures.append(f"fitted rate {out.max_rate:.6g} exceeds beta*(1+{RATE_TOL}) = {beta * (1 + RATE_TOL):.6g}")
    out.passed = not out.failures
    return out


def decomposition_residual(g: Multigraph, values, v0: int, rmax: int, on: str = "vertices") -> float:
    """max_r |M_r(f) - sum_i a_i F_i(r)| with each F_i generated by its recursion.

    The recursion only sees F_i(0) and F_i(1), so agreement ties the sphere
    means to the eigenvalue recursions rather than to linearity alone.
    """
    from .means import edge_recursion, radialization_mode, semiregular_recursion, vertex_recursion

    mus, phis = eigenbasis(g, on)
    W = family_weights(g, "sphere", v0, rmax, on)
    values = np.asarray(values, dtype=float)
    coeffs = phis.T @ values
    F01 = W[:2] @ phis
    mode, p, q = radialization_mode(g, v0, on)
    assembled = np.zeros(rmax + 1)
    for i, mu in enumerate(mus):
        if mode == "vertex":
            F = vertex_recursion(F01[0, i], F01[1, i], mu, q, rmax)
        elif mode == "edge":
            F = edge_recursion(F01[0, i], F01[1, i], mu, q, rmax)
        else:
            F = semiregular_recursion(F01[0, i], F01[1, i], mu, p, q, rmax)
        assembled += coeffs[i] * F
    return float(np.max(np.abs(W @ values - assembled)))


__all__ = [
    "BoundCertificate",
    "CrossCheckReport",
    "FitError",
    "RadializationState",
    "RateFit",
    "certify_bound",
    "check_family",
    "cross_check_theorem",
    "decomposition_residual",
    "fit_rate",
    "graph_average",
    "radialization_states",
    "random_functions",
    "theorem_spectrum",
]
