"""Exception types shared across the package."""


class ContractViolation(ValueError):
    """Raised when an operation is called with incompatible shapes or endpoints."""


class ValidationError(ValueError):
    """Raised when a value fails its structural invariants (R-linearity, nilpotency, ...)."""

    def __init__(self, message: str, entity: str | None = None):
        super().__init__(message)
        self.entity = entity


class NotExactError(ValidationError):
    """Raised when a sequence that must be exact is not."""
