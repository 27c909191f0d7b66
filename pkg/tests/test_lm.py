"""Tests for the Levenberg-Marquardt solver."""

import numpy as np
import pytest
from scipy.optimize import curve_fit

from tfpdiff.calibration.lm import lm_minimize, numeric_jacobian
from tfpdiff.calibration.pipeline import standard_errors
from tfpdiff.core.types import LmOptions
from tfpdiff.errors import DomainError, RankDeficiencyError

X = np.linspace(0.0, 9.0, 10)


def line_residuals(y: np.ndarray):
    return lambda p: p[0] + p[1] * X - y


class TestLinearModels:
    """Gauss-Newton is exact for residuals linear in the parameters."""

    def test_exact_line_in_two_iterations(self):
        y = 1.0 + 2.0 * X
        fit = lm_minimize(line_residuals(y), {"a": 0.0, "b": 0.0}, LmOptions(initial_damping=1e-12))
        assert fit.converged
        assert fit.iterations <= 2
        assert fit.ssr < 1e-20
        assert fit.params["a"] == pytest.approx(1.0, abs=1e-9)
        assert fit.params["b"] == pytest.approx(2.0, abs=1e-9)

    def test_exact_line_with_default_damping(self):
        y = 1.0 + 2.0 * X
        fit = lm_minimize(line_residuals(y), {"a": 0.0, "b": 0.0})
        assert fit.converged
        assert fit.ssr < 1e-18
        assert fit.params["b"] == pytest.approx(2.0, rel=1e-9)

    def test_zero_residual_fit_has_zero_standard_errors(self):
        fit = lm_minimize(line_residuals(3.0 - 0.5 * X), {"a": 1.0, "b": 1.0}, LmOptions(initial_damping=1e-12))
        assert all(v < 1e-9 for v in standard_errors(fit).values())

    def test_identity_residual_needs_more_observations(self):
        with pytest.raises(DomainError):
            lm_minimize(lambda p: p - 4.0, {"p": 0.0})

    def test_identity_residual_converges(self):
        fit = lm_minimize(lambda p: np.repeat(p - 4.0, 3), {"p": 0.0})
        assert fit.converged
        assert fit.params["p"] == pytest.approx(4.0, abs=1e-9)

    def test_matches_scipy_covariance(self):
        rng = np.random.default_rng(3)
        y = 1.0 + 2.0 * X + rng.normal(0.0, 0.3, X.size)
        fit = lm_minimize(line_residuals(y), {"a": 0.0, "b": 0.0})
        popt, pcov = curve_fit(lambda x, a, b: a + b * x, X, y)
        np.testing.assert_allclose([fit.params["a"], fit.params["b"]], popt, rtol=1e-6)
        np.testing.assert_allclose(fit.covariance, pcov, rtol=1e-5)

    def test_standard_errors_scale_with_noise(self):
        """Doubling the noise variance scales standard errors by sqrt(2)."""
        ratios = []
        for seed in range(200):
            z = np.random.default_rng(seed).standard_normal(X.size)
            se = [
                standard_errors(lm_minimize(line_residuals(1.0 + 2.0 * X + scale * z), {"a": 0.0, "b": 0.0}))["b"]
                for scale in (0.1, 0.1 * np.sqrt(2.0))
            ]
            ratios.append(se[1] / se[0])
        assert np.mean(ratios) == pytest.approx(np.sqrt(2.0), rel=0.15)


class TestNonlinear:
    """Tests on the exponential frontier model."""

    T = np.arange(29.0)
    Y = 28.7205 * np.exp(0.0381261 * T)

    def residuals(self, p):
        return p[0] * np.exp(p[1] * self.T) - self.Y

    def test_recovers_exponential(self):
        fit = lm_minimize(self.residuals, {"a": 20.0, "b": 0.01})
        assert fit.converged
        assert fit.params["a"] == pytest.approx(28.7205, rel=1e-6)
        assert fit.params["b"] == pytest.approx(0.0381261, rel=1e-6)

    def test_ssr_history_is_monotone(self):
        fit = lm_minimize(self.residuals, {"a": 20.0, "b": 0.01})
        history = np.array(fit.ssr_history)
        assert len(history) == fit.iterations + 1
        assert np.all(np.diff(history) <= 0)

    def test_iteration_cap_reports_non_convergence(self):
        fit = lm_minimize(self.residuals, {"a": 20.0, "b": 0.01}, LmOptions(max_iterations=1))
        assert not fit.converged
        assert fit.iterations == 1
        assert fit.ssr < fit.ssr_history[0]

    def test_non_finite_trial_steps_inflate_damping(self):
        def guarded(p):
            if p[1] > 0.2:
                return np.full(self.T.size, np.nan)
            return self.residuals(p)

        fit = lm_minimize(guarded, {"a": 20.0, "b": 0.01})
        assert fit.params["b"] == pytest.approx(0.0381261, rel=1e-6)

    def test_non_finite_initial_point_rejected(self):
        with pytest.raises(DomainError):
            lm_minimize(lambda p: np.full(5, np.inf), {"a": 1.0, "b": 1.0})

    def test_rank_deficiency(self):
        # Only the sum a + b is identified.
        with pytest.raises(RankDeficiencyError):
            lm_minimize(lambda p: (p[0] + p[1]) * np.ones(4) - 2.0, {"a": 0.3, "b": 0.1})

    def test_logger_receives_every_trial(self):
        calls = []

        class Recorder:
            def log_iteration(self, iteration, ssr, damping, params, accepted):
                calls.append((iteration, ssr, accepted))

        fit = lm_minimize(self.residuals, {"a": 20.0, "b": 0.01}, logger=Recorder())
        accepted = [c for c in calls if c[2]]
        assert len(accepted) == fit.iterations
        assert [c[1] for c in accepted] == list(fit.ssr_history[1:])


class TestNumericJacobian:
    """Tests for numeric_jacobian."""

    def test_linear_jacobian(self):
        jac = numeric_jacobian(lambda p: p[0] + p[1] * X, np.array([1.0, 2.0]), 1e-6)
        np.testing.assert_allclose(jac[:, 0], 1.0, rtol=1e-8)
        np.testing.assert_allclose(jac[:, 1], X, rtol=1e-8, atol=1e-8)

    def test_zero_parameter_uses_absolute_step(self):
        jac = numeric_jacobian(lambda p: np.array([np.sin(p[0]), np.cos(p[0])]), np.array([0.0]), 1e-6)
        np.testing.assert_allclose(jac[:, 0], [1.0, 0.0], atol=1e-9)
