"""Exception types shared across the package."""


class PoolFormatError(ValueError):
    """Raised when a pool file cannot be parsed or fails validation."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NumericalDomainError(ArithmeticError):
    """A matrix is not positive definite even after regularization."""


class NoValidPairError(RuntimeError):
    """No (target, sensitive) pair has non-empty anchor/positive/negative pools."""


class TieDetectedError(RuntimeError):
    """Exact or near-exact similarity tie makes the current point degenerate;
    the caller should resample."""


class NonFiniteLossError(ArithmeticError):
    """Training produced a NaN/inf loss value."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class MetricUndefinedError(ValueError):
    """A fairness metric has no defined value on the given predictions."""


class MetricWarning(UserWarning):
    """A class or subgroup was skipped while computing a fairness metric."""
