"""
Closed-form evaluators and ODE right-hand sides of the technology diffusion model.

All functions are pure and scalar apart from moving_frontier_curve. Time is measured in years.
"""

import math

import numpy as np

from tfpdiff.core.types import (
    AdoptionParams,
    CatchUpParams,
    FixedFrontierParams,
    FrontierParams,
    KremerParams,
)
from tfpdiff.errors import DomainError, NumericError

# Relative width of the gamma == gamma_m band where the moving-frontier solution
# switches to its analytic limit.
DEGENERATE_RATE_TOL = 1e-9


def _check_time(t: float) -> None:
    if not (t >= 0 and math.isfinite(t)):
        raise DomainError(f"t must be finite and >= 0, got {t}", component="model")


def _check_adoption(p: AdoptionParams) -> None:
    if p.sigma + p.h <= 0:
        raise DomainError("sigma + h must be > 0", component="model")


# =============================================================================
# Adoption (herding with one-directional transitions)
# =============================================================================


def eval_s(p: AdoptionParams, t: float) -> float:
    """Share of non-adopters s(t) with s(0) = 1."""
    _check_time(t)
    _check_adoption(p)
    if p.sigma == 0:
        return 1.0
    k = p.sigma + p.h
    decay = math.exp(-k * t)
    # (h + sigma) / (h + sigma e^{kt}) rewritten to avoid overflow for large t.
    return k * decay / (p.h * decay + p.sigma)


def eval_x(p: AdoptionParams, t: float) -> float:
    """Share of adopters x(t) = 1 - s(t)."""
    return 1.0 - eval_s(p, t)


def rhs_adoption(p: AdoptionParams, x: float) -> float:
    """dx/dt = (1 - x)(sigma + h x)."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}", component="model")
    return (1.0 - x) * (p.sigma + p.h * x)


def rhs_non_adopters(p: AdoptionParams, s: float) -> float:
    """ds/dt = -s (sigma + h (1 - s))."""
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"s must lie in [0, 1], got {s}", component="model")
    return -s * (p.sigma + p.h * (1.0 - s))


def rhs_tfp_adoption(p: AdoptionParams, gamma: float, a: float, t: float) -> float:
    """dA/dt = gamma A s(t): growth driven by the non-adopter share."""
    return gamma * a * eval_s(p, t)


# =============================================================================
# Kremer baseline
# =============================================================================


def kremer_tfp(k: KremerParams, t: float) -> float:
    _check_time(t)
    return k.a0 * math.exp(k.gamma * k.n * t)


def rhs_kremer(k: KremerParams, a: float) -> float:
    return k.gamma * k.n * a


# =============================================================================
# Fixed frontier
# =============================================================================


def _fixed_rate(p: FixedFrontierParams) -> float:
    return p.a_m * p.h / (p.a_m - p.a0)


def eval_a_fixed(p: FixedFrontierParams, t: float) -> float:
    """Logistic catch-up toward a constant frontier a_m, with A(0) = a0."""
    _check_time(t)
    if p.a0 == p.a_m:
        return p.a0
    if t == 0:
        return p.a0
    decay = math.exp(-_fixed_rate(p) * t)
    return p.a_m * p.a0 / (p.a_m * decay + p.a0 * (1.0 - decay))


def rhs_logistic_fixed(p: FixedFrontierParams, a: float) -> float:
    if p.a0 == p.a_m:
        return 0.0
    return _fixed_rate(p) * a * (1.0 - a / p.a_m)


def herding_rate_family(a0: float = 1.0, a_m: float = 2.0, count: int = 11) -> list[FixedFrontierParams]:
    """Convergence speeds h = 0.05 * 2^(i/2), i = 0..count-1."""
    return [FixedFrontierParams(a0=a0, a_m=a_m, h=0.05 * 2 ** (i / 2)) for i in range(count)]


# =============================================================================
# Moving frontier
# =============================================================================


def eval_frontier(f: FrontierParams, t: float) -> float:
    """a_m0 exp(gamma_m t); t may be negative for back-casting."""
    return f.a_m0 * math.exp(f.gamma_m * t)


def eval_a_moving(f: FrontierParams, c: CatchUpParams, t: float) -> float:
    """
    Logistic growth toward an exponentially moving frontier.

    Evaluated as A_m(t) / (gamma g(t) + (a_m0 / a0) e^{-d t}) with d = gamma - gamma_m and
    g(t) = (1 - e^{-d t}) / d, which equals the textbook closed form divided through by
    e^{d t}. g(t) -> t as d -> 0, which is the analytic limit used inside the degenerate band.
    """
    _check_time(t)
    if t == 0:
        return c.a0
    d = c.gamma - f.gamma_m
    ratio = f.a_m0 / c.a0
    if abs(d) <= DEGENERATE_RATE_TOL * c.gamma:
        denom = c.gamma * t + ratio
        value = f.a_m0 * math.exp(c.gamma * t) / denom
    else:
        g = -math.expm1(-d * t) / d
        denom = c.gamma * g + ratio * math.exp(-d * t)
        value = eval_frontier(f, t) / denom
    if not (denom > 0 and math.isfinite(denom)):
        raise DomainError(
            f"moving-frontier denominator is not positive at t={t} ({denom})", component="model"
        )
    if not math.isfinite(value):
        raise NumericError(f"moving-frontier value overflowed at t={t}", component="model")
    return value


def moving_frontier_curve(f: FrontierParams, a0: float, gamma: float, t: np.ndarray) -> np.ndarray:
    """
    eval_a_moving over an array of times with raw (a0, gamma) and no domain checks.

    Used as the calibration model so trial steps with a0 <= 0 or gamma <= 0 are
    evaluated rather than refused. Poles and overflow come back as inf or nan.
    """
    t = np.asarray(t, dtype=float)
    d = gamma - f.gamma_m
    with np.errstate(all="ignore"):
        ratio = f.a_m0 / a0
        if abs(d) <= DEGENERATE_RATE_TOL * abs(gamma):
            return f.a_m0 * np.exp(gamma * t) / (gamma * t + ratio)
        g = -np.expm1(-d * t) / d
        return f.a_m0 * np.exp(f.gamma_m * t) / (gamma * g + ratio * np.exp(-d * t))


def growth_rate_moving(f: FrontierParams, c: CatchUpParams, t: float) -> float:
    """gamma (1 - A(t) / A_m(t))."""
    return c.gamma * (1.0 - eval_a_moving(f, c, t) / eval_frontier(f, t))


def rhs_logistic_moving(f: FrontierParams, gamma: float, a: float, t: float) -> float:
    if not a > 0:
        raise DomainError(f"a must be > 0, got {a}", component="model")
    return gamma * a * (1.0 - a / eval_frontier(f, t))


def asymptotic_frontier_ratio(gamma: float, gamma_m: float) -> float:
    """Long-run limit of A(t) / A_m(t)."""
    if not gamma > gamma_m > 0:
        raise DomainError(
            f"need gamma > gamma_m > 0, got gamma={gamma}, gamma_m={gamma_m}", component="model"
        )
    return 1.0 - gamma_m / gamma
