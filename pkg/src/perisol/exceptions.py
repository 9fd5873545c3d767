""" Perisol
    Exception hierarchy shared by every module
"""


class PerisolError(Exception):
    """Root of all perisol errors"""


class ModelError(PerisolError, ValueError):
    """Invalid model values (negative coefficient flagged nonneg, malformed grid, ...)"""


class HypothesisError(ModelError):
    """A standing hypothesis (H1)..(H7) of the system class does not hold.

    The `tag` attribute names the hypothesis, so that callers (mainly the CLI) can report it
    without parsing the message.
    """

    def __init__(self, tag: str, message: str):
        super().__init__(f"({tag}) {message}")
        self.tag = tag


class ConfigError(PerisolError, ValueError):
    """Configuration file does not match its schema"""

    def __init__(self, message: str, errors: dict = None):
        super().__init__(message)
        self.errors = errors or {}


class CriterionPreconditionError(PerisolError):
    """A criterion was asked for on a system outside of its scope"""


class UnsupportedCaseError(PerisolError):
    """Infinite limit values where a finite one is required"""


class NumericalError(PerisolError, ArithmeticError):
    """NaN or overflow in an iterate or a trajectory"""

    def __init__(self, message: str, index: int = -1):
        super().__init__(message)
        self.index = index


class PositivityError(NumericalError):
    """A state component went below the positivity tolerance"""
