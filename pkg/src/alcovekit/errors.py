"""Exception hierarchy shared by all modules."""


class AlcoveKitError(Exception):
    """Base class for library errors."""


class ConfigurationError(AlcoveKitError):
    """Unknown Cartan type or otherwise invalid configuration."""


class DomainError(AlcoveKitError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class UsageError(AlcoveKitError):
    """The call itself is malformed (mismatched variables, window too small, ...)."""


class OutOfRangeError(UsageError, IndexError):
    """Coefficient requested beyond a truncation bound."""


class ConvergenceError(AlcoveKitError):
    """A stabilization procedure did not converge within its budget."""


class ConsistencyError(AlcoveKitError, AssertionError):
    """An internal identity failed; signals a convention bug, not bad input."""
