"""
Fixed-step classic Runge-Kutta integrator used as an independent oracle for the
closed forms in tfpdiff.core.model.
"""

import math

import numpy as np

from tfpdiff.core.types import OdeProblem, Trajectory
from tfpdiff.errors import DomainError, NumericError

# A remainder shorter than this fraction of the span is absorbed into the last full step.
_ENDPOINT_SLACK = 1e-12


def _time_grid(t_start: float, t_end: float, step: float) -> np.ndarray:
    span = t_end - t_start
    n_full = math.floor(span / step)
    times = t_start + step * np.arange(n_full + 1, dtype=float)
    if t_end - times[-1] > _ENDPOINT_SLACK * max(span, 1.0):
        times = np.append(times, t_end)
    else:
        times[-1] = t_end
    return times


def _rk4_step(rhs, t: float, y: float, dt: float) -> float:
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1)
    k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2)
    k4 = rhs(t + dt, y + dt * k3)
    if not all(math.isfinite(k) for k in (k1, k2, k3, k4)):
        raise NumericError(f"non-finite RK4 stage at t={t}", component="ode")
    return y + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def integrate_rk4(p: OdeProblem, step: float) -> Trajectory:
    """
    Integrate with a uniform step; the final partial step is shortened so the
    trajectory ends exactly on t_end. Both endpoints are included.
    """
    if not (step > 0 and math.isfinite(step)):
        raise DomainError(f"step must be > 0, got {step}", component="ode")
    t_start, t_end = p.t_span
    if t_start == t_end:
        return Trajectory(times=np.array([t_start]), values=np.array([p.y0]))
    if step > t_end - t_start:
        raise DomainError(
            f"step {step} exceeds the span {t_end - t_start}", component="ode"
        )

    times = _time_grid(t_start, t_end, step)
    values = np.empty_like(times)
    values[0] = y = float(p.y0)
    rhs = p.rhs
    for i in range(1, len(times)):
        t = times[i - 1]
        y = _rk4_step(rhs, t, y, times[i] - t)
        values[i] = y
    return Trajectory(times=times, values=values)


def richardson_error_estimate(p: OdeProblem, step: float) -> float:
    """Max-norm gap between the step and step/2 solutions on the coarse grid."""
    coarse = integrate_rk4(p, step)
    fine = integrate_rk4(p, step / 2)
    if len(coarse) == 1:
        return 0.0
    # Interior coarse point k sits at fine index 2k; both grids end on t_end.
    idx = np.append(2 * np.arange(len(coarse) - 1), len(fine) - 1)
    return float(np.max(np.abs(coarse.values - fine.values[idx])))
