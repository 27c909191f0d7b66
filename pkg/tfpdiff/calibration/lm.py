"""
Levenberg-Marquardt nonlinear least squares with central-difference Jacobians.

Each iteration solves (J^T J + lambda diag(J^T J)) delta = -J^T r. A step that lowers
the sum of squared residuals is accepted and lambda is divided by the damping
factor; otherwise lambda is multiplied and the step retried.
"""

from collections.abc import Callable, Mapping
from typing import TYPE_CHECKING

import numpy as np

from tfpdiff.core.types import FitResult, LmOptions
from tfpdiff.errors import DomainError, NumericError, RankDeficiencyError

if TYPE_CHECKING:
    from tfpdiff.logger.fit_logger import FitLogger

ResidualFn = Callable[[np.ndarray], np.ndarray]

# Past this damping no step can lower the SSR at double precision.
_MAX_DAMPING = 1e16

# J is treated as rank deficient when its condition number exceeds 1 / _RANK_RTOL.
_RANK_RTOL = 1e-9

# Converged fits get at most this many Gauss-Newton polishing steps.
_POLISH_STEPS = 3

# SSR growth within this relative tolerance is rounding.
_SSR_RTOL = 1e-12


def numeric_jacobian(fun: ResidualFn, p: np.ndarray, rel_step: float) -> np.ndarray:
    """Central differences with step rel_step * |p_i| (rel_step when p_i == 0)."""
    p = np.asarray(p, dtype=float)
    columns = []
    for i in range(p.size):
        h = rel_step * abs(p[i]) if p[i] != 0 else rel_step
        up = p.copy()
        down = p.copy()
        up[i] += h
        down[i] -= h
        columns.append((np.asarray(fun(up), dtype=float) - np.asarray(fun(down), dtype=float)) / (up[i] - down[i]))
    jac = np.column_stack(columns)
    if not np.all(np.isfinite(jac)):
        raise NumericError("non-finite Jacobian entry", component="calibration")
    return jac


def _safe_residuals(fun: ResidualFn, p: np.ndarray) -> np.ndarray | None:
    """Residuals, or None when the model cannot be evaluated at p."""
    try:
        r = np.asarray(fun(p), dtype=float)
    except (DomainError, NumericError, ArithmeticError):
        return None
    return r if np.all(np.isfinite(r)) else None


def _covariance(jac: np.ndarray, ssr: float, n_obs: int) -> np.ndarray:
    singular_values = np.linalg.svd(jac, compute_uv=False)
    if singular_values.min() <= _RANK_RTOL * singular_values.max():
        raise RankDeficiencyError("J^T J is singular at the optimum")
    jtj = jac.T @ jac
    try:
        inv = np.linalg.inv(jtj)
    except np.linalg.LinAlgError as e:
        raise RankDeficiencyError(f"J^T J is singular at the optimum: {e}") from e
    s2 = ssr / (n_obs - jtj.shape[0])
    cov = s2 * inv
    return 0.5 * (cov + cov.T)


def _gauss_newton_polish(
    residuals: ResidualFn, p: np.ndarray, r: np.ndarray, ssr: float, jac_step: float
) -> tuple[np.ndarray, np.ndarray, float]:
    """
    Undamped Gauss-Newton steps from a converged point, kept while each step is shorter
    than the last and the SSR does not rise beyond rounding.
    """
    previous = np.inf
    for _ in range(_POLISH_STEPS):
        if ssr == 0.0:
            break
        jac = numeric_jacobian(residuals, p, jac_step)
        try:
            delta = np.linalg.lstsq(jac, -r, rcond=None)[0]
        except np.linalg.LinAlgError:
            break
        size = float(np.linalg.norm(delta) / max(float(np.linalg.norm(p)), np.finfo(float).tiny))
        if not size < previous:
            break
        trial = p + delta
        r_trial = _safe_residuals(residuals, trial)
        if r_trial is None:
            break
        ssr_trial = float(r_trial @ r_trial)
        if ssr_trial > ssr * (1.0 + _SSR_RTOL):
            break
        p, r, ssr = trial, r_trial, ssr_trial
        previous = size
    return p, r, ssr


def lm_minimize(
    residuals: ResidualFn,
    init: Mapping[str, float],
    opts: LmOptions | None = None,
    logger: "FitLogger | None" = None,
) -> FitResult:
    """
    Minimize sum(residuals(p)**2) starting from `init`.

    Stops when the relative SSR decrease of an accepted step is below opts.ftol, the
    gradient infinity norm is below opts.gtol, or after opts.max_iterations iterations.
    Running out of iterations gives converged=False; the best point is still returned.
    A converged point is refined by up to _POLISH_STEPS Gauss-Newton steps, which are not
    counted in `iterations` or `ssr_history`.
    """
    opts = opts or LmOptions()
    names = list(init)
    p = np.array([float(init[k]) for k in names])

    r = _safe_residuals(residuals, p)
    if r is None:
        raise DomainError("residuals are not finite at the initial point", component="calibration")
    n_obs = r.size
    if n_obs <= p.size:
        raise DomainError(
            f"need more residuals ({n_obs}) than parameters ({p.size})", component="calibration"
        )

    ssr = float(r @ r)
    damping = opts.initial_damping
    history = [ssr]
    iterations = 0
    converged = False

    while iterations < opts.max_iterations:
        if ssr == 0.0:
            converged = True
            break
        jac = numeric_jacobian(residuals, p, opts.jac_step)
        grad = jac.T @ r
        if np.max(np.abs(grad)) < opts.gtol:
            converged = True
            break

        jtj = jac.T @ jac
        scale = np.diag(jtj).copy()
        scale[scale == 0.0] = 1.0
        accepted = False
        while damping <= _MAX_DAMPING:
            try:
                delta = np.linalg.solve(jtj + damping * np.diag(scale), -grad)
            except np.linalg.LinAlgError:
                damping *= opts.damping_factor
                continue
            trial = p + delta
            r_trial = _safe_residuals(residuals, trial)
            ssr_trial = float(r_trial @ r_trial) if r_trial is not None else np.inf
            if logger:
                logger.log_iteration(iterations + 1, ssr_trial, damping, dict(zip(names, trial)), ssr_trial < ssr)
            if ssr_trial < ssr:
                accepted = True
                break
            damping *= opts.damping_factor

        if not accepted:
            # No descent step exists at machine precision: p is a minimum.
            converged = True
            break

        iterations += 1
        relative_drop = (ssr - ssr_trial) / ssr
        p, r, ssr = trial, r_trial, ssr_trial
        history.append(ssr)
        damping /= opts.damping_factor
        if relative_drop < opts.ftol:
            converged = True
            break

    if converged:
        p, r, ssr = _gauss_newton_polish(residuals, p, r, ssr, opts.jac_step)

    jac = numeric_jacobian(residuals, p, opts.jac_step)
    cov = _covariance(jac, ssr, n_obs)
    params = dict(zip(names, p.tolist()))
    stderr = dict(zip(names, np.sqrt(np.clip(np.diag(cov), 0.0, None)).tolist()))
    return FitResult(
        params=params,
        stderr=stderr,
        covariance=cov,
        ssr=ssr,
        n_obs=n_obs,
        iterations=iterations,
        converged=converged,
        ssr_history=tuple(history),
    )
