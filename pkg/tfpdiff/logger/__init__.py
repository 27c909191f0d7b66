from tfpdiff.logger.fit_logger import FitLogger
from tfpdiff.logger.verbose import VerbosePrinter

__all__ = ["FitLogger", "VerbosePrinter"]
