"""Exception types shared across the package.

Two families: DomainError for violated preconditions (bad arguments,
malformed config) and EstimationError for failures while estimating
(unusable spectrum, degenerate least squares, a broken objective).
The CLI maps these onto exit codes 2 and 3 respectively.
"""


class DomainError(ValueError):
    """An argument violates a documented precondition."""


class ConfigError(DomainError):
    """A scenario config file or CLI override is invalid."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        if path is not None and line is not None:
            message = f"{path}:{line}: {message}"
        elif path is not None:
            message = f"{path}: {message}"
        super().__init__(message)


class EstimationError(RuntimeError):
    """Estimation cannot proceed or failed while running."""


class NoUsableBandError(EstimationError):
    """No spectrum bin exceeds the support threshold."""


class ConditioningError(EstimationError):
    """The least-squares system is rank deficient or near-singular."""

    def __init__(self, message, condition):
        self.condition = float(condition)
        super().__init__(f"{message} (condition estimate {self.condition:.3e})")


class GaRunError(EstimationError):
    """The GA objective produced a value the search cannot use."""
