"""Exception types shared across the package."""


class FclsimError(Exception):
    """Base class for all package-specific errors."""


class ShapeError(FclsimError, ValueError):
    """Vector/matrix dimensions do not match what an operation requires."""


class NumericError(FclsimError, ArithmeticError):
    """A non-finite value appeared where the contract requires finite math."""


class InsufficientSamplesError(FclsimError, ValueError):
    """A class has too few samples for the requested resampling."""


class InvalidGroupsError(FclsimError, ValueError):
    """Task class groups overlap or reference unknown classes."""


class StrategyStateError(FclsimError, ValueError):
    """A strategy was invoked with state inconsistent with its kind."""


class EmptyDataError(FclsimError, ValueError):
    """An operation that needs at least one sample received none."""


class NoDataError(FclsimError, ValueError):
    """Aggregation received no update carrying any samples."""


class ConfigError(FclsimError, ValueError):
    """Experiment configuration is missing, malformed, or out of range.

    ``field`` carries the dotted path of the offending entry when known.
    """

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field
