"""Exception types shared across the package."""


class FinexError(Exception):
    """Base class for all finex-specific errors."""


class DomainError(FinexError, ValueError):
    """An argument violates an operation's precondition."""


class ExchangeabilityError(DomainError):
    """Sequence probabilities are not permutation symmetric."""


class NormalizationError(DomainError):
    """Probabilities do not sum to one within tolerance."""


class CapacityError(FinexError):
    """A dense tensor-space object would exceed the supported size."""


class SolverFailure(FinexError):
    """A numerical routine failed to reach its required accuracy."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
