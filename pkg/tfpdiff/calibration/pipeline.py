"""
Two-stage calibration: fit the reference (frontier) economy's exponential path first,
then fit each catching-up country against that frozen frontier.
"""

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

import numpy as np

from tfpdiff.calibration.lm import lm_minimize
from tfpdiff.core.model import (
    asymptotic_frontier_ratio,
    eval_a_moving,
    eval_frontier,
    moving_frontier_curve,
)
from tfpdiff.core.types import (
    CatchUpParams,
    Dataset,
    FitResult,
    FrontierParams,
    LmOptions,
    ProjectionRow,
    ProjectionTable,
    TfpSeries,
    TimeOrigin,
)
from tfpdiff.errors import DomainError

if TYPE_CHECKING:
    from tfpdiff.logger.fit_logger import FitLogger

MIN_FIT_POINTS = 3
CATCHUP_GAMMA_GUESS = 0.1


def _check_fit_series(series: TfpSeries, origin: TimeOrigin) -> None:
    if len(series) < MIN_FIT_POINTS:
        raise DomainError(
            f"{series.country}: need at least {MIN_FIT_POINTS} observations, got {len(series)}",
            component="calibration",
        )
    origin.check_series(series)


def fit_frontier(
    series: TfpSeries,
    origin: TimeOrigin,
    opts: LmOptions | None = None,
    logger: "FitLogger | None" = None,
) -> FitResult:
    """Level-space fit of a_m0 exp(gamma_m t), seeded by a log-linear regression."""
    _check_fit_series(series, origin)
    t = series.times(origin)
    y = np.array(series.values)
    slope, intercept = np.polyfit(t, np.log(y), 1)

    def residuals(p: np.ndarray) -> np.ndarray:
        return p[0] * np.exp(p[1] * t) - y

    if logger:
        logger.log_fit_start(series.country, "frontier")
    fit = lm_minimize(
        residuals, {"a_m0": float(np.exp(intercept)), "gamma_m": float(slope)}, opts, logger
    )
    flags = () if fit.params["a_m0"] > 0 else ("a_m0<=0",)
    result = replace(fit, model="frontier", country=series.country, t0_year=origin.t0_year, flags=flags)
    if logger:
        logger.log_fit(result)
    return result


def _catchup_flags(params: dict[str, float], frontier: FrontierParams) -> tuple[str, ...]:
    flags = []
    if params["a0"] <= 0:
        flags.append("a0<=0")
    if params["gamma"] <= frontier.gamma_m:
        flags.append("gamma<=gamma_m")
    return tuple(flags)


def fit_catchup(
    series: TfpSeries,
    frontier: FrontierParams,
    origin: TimeOrigin,
    opts: LmOptions | None = None,
    logger: "FitLogger | None" = None,
    init: CatchUpParams | None = None,
) -> FitResult:
    """
    Fit (a0, gamma) of the moving-frontier solution with the frontier held fixed.

    The fit is unconstrained; a0 <= 0 or gamma <= gamma_m is reported in `flags`.
    """
    _check_fit_series(series, origin)
    t = series.times(origin)
    y = np.array(series.values)
    if init is None:
        init = CatchUpParams(a0=series.values[0], gamma=CATCHUP_GAMMA_GUESS)

    def residuals(p: np.ndarray) -> np.ndarray:
        return moving_frontier_curve(frontier, float(p[0]), float(p[1]), t) - y

    if logger:
        logger.log_fit_start(series.country, "catchup")
    fit = lm_minimize(residuals, {"a0": init.a0, "gamma": init.gamma}, opts, logger)
    result = replace(
        fit,
        model="catchup",
        country=series.country,
        t0_year=origin.t0_year,
        frontier=frontier,
        flags=_catchup_flags(fit.params, frontier),
    )
    if logger:
        logger.log_fit(result)
    return result


def standard_errors(fit: FitResult) -> dict[str, float]:
    """Square roots of the covariance diagonal, keyed by parameter name."""
    diag = np.diag(fit.covariance)
    if np.any(diag < 0):
        raise DomainError("covariance has a negative diagonal entry", component="calibration")
    return dict(zip(fit.param_names, np.sqrt(diag).tolist()))


def project(
    frontier: FrontierParams, c: CatchUpParams, origin: TimeOrigin, years: Iterable[int]
) -> list[tuple[int, float]]:
    projected = []
    for year in years:
        if year < origin.t0_year:
            raise DomainError(
                f"year {year} precedes t0_year {origin.t0_year}", component="calibration"
            )
        projected.append((int(year), eval_a_moving(frontier, c, origin.time_of(year))))
    return projected


def rank_by_gamma(fits: Sequence[tuple[str, FitResult]]) -> list[tuple[str, FitResult]]:
    """Descending gamma; ties broken by country identifier."""
    for country, fit in fits:
        if "gamma" not in fit.params:
            raise DomainError(f"{country}: fit has no gamma parameter", component="calibration")
    return sorted(fits, key=lambda item: (-item[1].params["gamma"], item[0]))


########################################################
########    Pipeline over a whole dataset       #########
########################################################


@dataclass(frozen=True)
class CombinedFits:
    """Output of fit_all: the reference fit plus one catch-up fit per country."""

    reference: FitResult | None
    countries: tuple[FitResult, ...]
    t0_year: int | None

    @property
    def frontier(self) -> FrontierParams:
        if self.reference is None:
            raise DomainError("no reference fit available", component="calibration")
        return self.reference.frontier_params()

    def to_dict(self):
        return {
            "t0_year": self.t0_year,
            "reference": self.reference.to_dict() if self.reference else None,
            "countries": [fit.to_dict() for fit in self.countries],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CombinedFits":
        reference = data.get("reference")
        t0_year = data.get("t0_year")
        return cls(
            reference=FitResult.from_dict(reference) if reference else None,
            countries=tuple(FitResult.from_dict(d) for d in data.get("countries", [])),
            t0_year=int(t0_year) if t0_year is not None else None,
        )


def fit_all(
    dataset: Dataset,
    reference: str,
    countries: Sequence[str],
    origin: TimeOrigin | None = None,
    opts: LmOptions | None = None,
    logger: "FitLogger | None" = None,
) -> CombinedFits:
    """Fit the reference frontier, then every listed country against it."""
    reference_series = dataset[reference]
    origin = origin or TimeOrigin.from_series(reference_series)
    reference_fit = fit_frontier(reference_series, origin, opts, logger)
    frontier = reference_fit.frontier_params()
    country_fits = tuple(
        fit_catchup(dataset[country], frontier, origin, opts, logger) for country in countries
    )
    return CombinedFits(reference=reference_fit, countries=country_fits, t0_year=origin.t0_year)


def projection_table(fits: CombinedFits, years: Sequence[int] = (2030, 2050)) -> ProjectionTable:
    """
    One row per country fit, ranked by gamma. Each fit is projected with the frontier
    and t0_year it carries, falling back to those of the combined file.
    """
    ranked = rank_by_gamma([(fit.country or f"#{i}", fit) for i, fit in enumerate(fits.countries)])
    rows = []
    for country, fit in ranked:
        frontier = fit.frontier or fits.frontier
        t0_year = fit.t0_year if fit.t0_year is not None else fits.t0_year
        if t0_year is None:
            raise DomainError(f"{country}: fit carries no t0_year", component="calibration")
        c = fit.catchup_params()
        errors = standard_errors(fit)
        rows.append(
            ProjectionRow(
                country=country,
                a0=c.a0,
                stderr_a0=errors["a0"],
                gamma=c.gamma,
                stderr_gamma=errors["gamma"],
                projections=dict(project(frontier, c, TimeOrigin(t0_year=t0_year), years)),
            )
        )
    return ProjectionTable(rows=tuple(rows), years=tuple(years))


########################################################
########    Time origin and long-run summaries  #########
########################################################


def search_time_origin(
    frontier: FrontierParams,
    published: Sequence[tuple[CatchUpParams, dict[int, float]]],
    candidates: Iterable[int] = range(1985, 2006),
) -> tuple[int, float]:
    """
    Brute-force the integer t0_year whose projections best match published values.

    Returns (t0_year, worst relative mismatch over all published values).
    """
    best: tuple[int, float] | None = None
    for t0 in candidates:
        origin = TimeOrigin(t0_year=int(t0))
        worst = 0.0
        for c, values in published:
            try:
                for year, projected in project(frontier, c, origin, values):
                    worst = max(worst, abs(projected / values[year] - 1.0))
            except DomainError:
                worst = math.inf
                break
        if best is None or worst < best[1]:
            best = (int(t0), worst)
    if best is None:
        raise DomainError("no candidate years given", component="calibration")
    return best


def convergence_summary(
    frontier: FrontierParams, c: CatchUpParams, horizon: float = 500.0, step: float = 0.25
) -> dict[str, float]:
    """
    Long-run frontier share and the first time (years from origin) at which the
    share A/A_m reaches half of that limit.
    """
    limit = asymptotic_frontier_ratio(c.gamma, frontier.gamma_m)
    half_time = math.nan
    for t in np.arange(0.0, horizon + step, step):
        share = eval_a_moving(frontier, c, float(t)) / eval_frontier(frontier, float(t))
        if share >= 0.5 * limit:
            half_time = float(t)
            break
    return {"frontier_share_limit": limit, "half_limit_time": half_time}
