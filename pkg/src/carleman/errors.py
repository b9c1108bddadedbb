"""Exception types shared across the package."""


class CarlemanError(Exception):
    """Base class for all package errors."""


class ParameterRangeError(CarlemanError, ValueError):
    """A constructor parameter is outside its admissible range."""


class HorizonError(CarlemanError, ValueError):
    """An operation was asked to look past the sequence horizon."""


class PreconditionError(CarlemanError, ValueError):
    """A documented precondition of an operation does not hold."""


class ConsistencyError(CarlemanError, RuntimeError):
    """Two independent computations of the same quantity disagree."""


class ConstructionFailed(CarlemanError, RuntimeError):
    """A search-based construction exhausted its candidate set."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class HorizonExhausted(CarlemanError, RuntimeError):
    """A witness search ran out of horizon.

    ``achieved_n`` is the largest index for which a witness was found.
    """

    def __init__(self, message: str, achieved_n: int, partial=None):
        super().__init__(message)
        self.achieved_n = achieved_n
        self.partial = partial


class HorizonTooShort(CarlemanError, ValueError):
    """The horizon is too short for the requested construction."""
