"""
Exception hierarchy for tfpdiff.

Every error names the component that raised it so the CLI can report
`error[<component>]: <message>` on a single line.
"""


class TfpDiffusionError(Exception):
    """Base class for all errors raised by tfpdiff."""

    component: str = "tfpdiff"

    def __init__(self, message: str, component: str | None = None):
        super().__init__(message)
        if component is not None:
            self.component = component


class DomainError(TfpDiffusionError, ValueError):
    """A precondition or a type invariant was violated."""


class NumericError(TfpDiffusionError, ArithmeticError):
    """A computation produced a non-finite or otherwise unusable value."""


class RankDeficiencyError(NumericError):
    """J^T J is singular at the optimum, so no covariance exists."""

    component = "calibration"


class ParseError(TfpDiffusionError, ValueError):
    """Malformed input. `line` is 1-based and counts the header."""

    component = "data"

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateKeyError(ParseError):
    """The same (country, year) pair appears twice."""
