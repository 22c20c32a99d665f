"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input data (a distribution, covariance, or file) is malformed."""


class UsageError(ValueError):
    """A function was called with arguments outside its contract."""


class DomainError(ValueError):
    """Parameters fall outside the region where a construction is defined."""


class IllConditionedError(ArithmeticError):
    """A whitened cross-correlation reached 1, so the information is unbounded."""


class NegativeInformationError(ArithmeticError):
    """A provably non-negative quantity came out negative beyond round-off."""


class EnumerationCapError(RuntimeError):
    """The polytope is too large for exhaustive vertex enumeration."""
