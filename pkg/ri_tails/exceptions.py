from typing import Dict, Optional, Sequence


class RiTailsError(Exception):
    """Base exception for tail-characteristic computations."""
    pass

class ConfigurationError(RiTailsError):
    """Raised when there is an error in the environment configuration."""
    pass

class ValidationError(RiTailsError):
    """Raised when a value object is constructed from invalid data."""
    pass

class DomainError(RiTailsError):
    """Raised when an argument lies outside the mathematical domain of an operation."""
    pass

class UsageError(RiTailsError):
    """Raised when an operation is called with an unsupported combination of arguments."""
    pass

class ParseError(UsageError):
    """Raised when a space, grid or random-variable spec cannot be parsed."""

    def __init__(self, message: str, token: Optional[str] = None):
        super().__init__(message)
        self.token = token

class RangeError(RiTailsError):
    """Raised when a level is not attained inside a search range."""

    def __init__(self, message: str, lo: float, hi: float, values: Sequence[float] = ()):
        super().__init__(message)
        self.lo = lo
        self.hi = hi
        self.values = tuple(values)

class NumericalError(RiTailsError):
    """Raised when quadrature or root bracketing fails."""

    def __init__(self, message: str, diagnostics: Optional[Dict] = None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})
