from tfpdiff.calibration.pipeline import CombinedFits, fit_all, fit_catchup, fit_frontier
from tfpdiff.core.model import eval_a_fixed, eval_a_moving, eval_frontier, eval_s, eval_x
from tfpdiff.errors import DomainError, NumericError, ParseError, TfpDiffusionError

__all__ = [
    "CombinedFits",
    "DomainError",
    "NumericError",
    "ParseError",
    "TfpDiffusionError",
    "eval_a_fixed",
    "eval_a_moving",
    "eval_frontier",
    "eval_s",
    "eval_x",
    "fit_all",
    "fit_catchup",
    "fit_frontier",
]
