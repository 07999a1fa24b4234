"""Exceptions raised by the casimir-wall modules.

Domain problems (bad arguments) derive from ``DomainError`` and therefore
also from ``ValueError``; numerical failures derive from ``NumericalError``
and carry the best estimate reached before giving up.
"""


class CasimirError(Exception):
    """Root of every error raised by this project."""


class DomainError(CasimirError, ValueError):
    pass


class UnsupportedOrderError(DomainError):
    pass


class PreconditionError(DomainError):
    pass


class SingularPointError(DomainError):
    def __init__(self, message: str, limit_value: float | None = None):
        super().__init__(message)
        self.limit_value = limit_value


class PoleError(DomainError):
    pass


class ValidityError(DomainError):
    pass


class NumericalError(CasimirError):
    def __init__(self, message: str, best_estimate: float | None = None):
        super().__init__(message)
        self.best_estimate = best_estimate


class BudgetExceededError(NumericalError):
    pass


class RegularizationError(NumericalError):
    pass


class AccelerationError(NumericalError):
    pass


class DivergentTailError(NumericalError):
    pass


class ConfigError(CasimirError):
    pass
