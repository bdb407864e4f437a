import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from covermeans import generators
from covermeans.means import MeanSeries, family_weights
from covermeans.spectral import HypothesisError, eigendecomposition, vertex_laplacian
from covermeans.verify import (
    FitError,
    bound_constant,
    certify_bound,
    check_family,
    cross_check_theorem,
    error_envelope,
    fit_rate,
    radialization_states,
    random_functions,
    theorem_spectrum,
)


def _series(errors):
    return MeanSeries("sphere", "vertices", 0, tuple(errors), 0.0)


def test_fit_recovers_geometric_rate():
    errs = 0.3 * 0.5 ** np.arange(25)
    for method in ("envelope", "raw"):
        fit = fit_rate(errs, method=method)
        assert fit.rate == pytest.approx(0.5, abs=1e-6)
        assert fit.r_squared == pytest.approx(1.0)


@given(st.floats(0.2, 0.95), st.floats(1e-3, 10))
def test_fit_rate_property(rate, scale):
    errs = scale * rate ** np.arange(30)
    assert fit_rate(errs).rate == pytest.approx(rate, rel=1e-6)


def test_envelope_removes_oscillation_dips():
    r = np.arange(40)
    errs = 0.7**r * np.abs(np.cos(1.3 * r))
    env = error_envelope(errs)
    assert np.all(np.diff(env) <= 0)
    assert np.all(env >= errs)
    assert fit_rate(errs, window=(4, 20)).rate == pytest.approx(0.7, abs=0.03)


def test_constant_series_cannot_be_fitted():
    with pytest.raises(FitError):
        fit_rate(np.zeros(20))


def test_short_series_rejected():
    with pytest.raises(FitError):
        fit_rate([1.0, 0.5, 0.25])


def test_fit_respects_target():
    vals = 2.0 + 0.4 ** np.arange(20)
    assert fit_rate(vals, target=2.0).rate == pytest.approx(0.4)


def test_certify_geometric_series():
    errs = 0.9 * 0.6 ** np.arange(30)
    cert = certify_bound(_series(errs), 0.6, 1.0)
    assert cert.holds and cert.c_emp == pytest.approx(0.9)


def test_certify_rejects_too_small_beta():
    errs = 0.9 * 0.6 ** np.arange(30)
    cert = certify_bound(_series(errs), 0.5, 1.0)
    assert not cert.holds
    assert cert.c_emp > cert.c_half


def test_certify_zero_errors():
    cert = certify_bound(_series(np.zeros(20)), 0.5, 1.0)
    assert cert.holds and cert.c_emp == 0


def test_certify_takes_several_series():
    a = _series(0.5 * 0.6 ** np.arange(20))
    b = _series(2.0 * 0.6 ** np.arange(20))
    assert certify_bound([a, b], 0.6, 1.0).c_emp == pytest.approx(2.0)


def test_bound_constant_scales_with_norm():
    errs = 0.6 ** np.arange(10)
    assert bound_constant(errs, 0.6, 2.0) == pytest.approx(0.5)


def test_random_functions_are_seeded():
    a = random_functions(10, 5, seed=4)
    assert a.shape == (10, 5)
    assert np.array_equal(a, random_functions(10, 5, seed=4))
    assert np.all(np.abs(a) <= 1)


@pytest.mark.parametrize(
    "g,theorem",
    [(generators.petersen(), 1), (generators.complete(4), 1), (generators.complete(4), 2),
     (generators.petersen(), 2), (generators.complete_bipartite(3, 4), 3)],
    ids=["petersen-1", "K4-1", "K4-2", "petersen-2", "K34-3"],
)
def test_cross_check_passes(g, theorem):
    rep = cross_check_theorem(g, theorem, trials=20, seed=1)
    assert rep.passed, rep.failures
    assert rep.max_rate <= rep.beta * 1.05
    assert rep.skipped_fits == 0


def test_cross_check_barbell_rate_is_slower():
    rep = cross_check_theorem(generators.barbell(), 1, trials=20, seed=1, rmax=30)
    assert rep.beta > 0.8
    assert rep.passed, rep.failures


def test_cross_check_with_given_functions():
    g = generators.petersen()
    f = np.random.default_rng(0).uniform(-1, 1, 10)
    rep = cross_check_theorem(g, 1, functions=f)
    assert rep.trials == 1 and rep.seed is None


def test_too_small_beta_is_caught():
    # a function concentrated on the slowest eigenvalue decays like beta, not faster
    g = generators.barbell()
    mus, phis = eigendecomposition(vertex_laplacian(g))
    slow = phis[:, 1]
    W = {v: family_weights(g, "sphere", v, 40) for v in range(g.n_vertices)}
    c_by_base, c_emp, c_half, _, _ = check_family(W, slow[:, None], 2**-0.5, (4, 20))
    assert c_emp > 1.05 * c_half


@pytest.mark.parametrize(
    "g,theorem",
    [(generators.cycle(6), 1), (generators.complete_bipartite(3, 3), 1), (generators.complete_bipartite(2, 3), 3),
     (generators.petersen(), 3), (generators.cycle(5), 2)],
    ids=["C6-1", "K33-1", "K23-3", "petersen-3", "C5-2"],
)
def test_hypotheses_enforced(g, theorem):
    with pytest.raises(HypothesisError):
        theorem_spectrum(g, theorem)


def test_radialization_states_cover_every_eigenfunction():
    g = generators.petersen()
    f = np.arange(10.0)
    states = radialization_states(g, f, 0, report=theorem_spectrum(g, 1))
    assert len(states) == 10
    # coefficients reproduce f
    assert sum(s.coefficient**2 for s in states) == pytest.approx(float(f @ f))
    assert {s.case for s in states} == {"constant", "Dneg"}
