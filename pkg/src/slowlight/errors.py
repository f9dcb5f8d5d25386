"""Exception types shared across the package."""


class SlowlightError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(SlowlightError, ValueError):
    """Invalid parameter, malformed input data, or broken invariant."""


class NumericError(SlowlightError, ArithmeticError):
    """A numeric guard fired (e.g. a pulse truncated by its window)."""
