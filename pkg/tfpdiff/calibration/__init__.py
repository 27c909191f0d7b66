from tfpdiff.calibration.lm import lm_minimize, numeric_jacobian
from tfpdiff.calibration.pipeline import (
    CombinedFits,
    convergence_summary,
    fit_all,
    fit_catchup,
    fit_frontier,
    project,
    projection_table,
    rank_by_gamma,
    search_time_origin,
    standard_errors,
)

__all__ = [
    "CombinedFits",
    "convergence_summary",
    "fit_all",
    "fit_catchup",
    "fit_frontier",
    "lm_minimize",
    "numeric_jacobian",
    "project",
    "projection_table",
    "rank_by_gamma",
    "search_time_origin",
    "standard_errors",
]
