"""Exception hierarchy for the scale-dynamics numerics."""


class ScaleDynamicsError(Exception):
    """Base error for every failure raised by the numerics package."""


class DomainError(ScaleDynamicsError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SingularFieldError(DomainError):
    """A field value that must be divided by (or logged) vanishes or is non-positive."""


class UnsupportedConfigurationError(ScaleDynamicsError):
    """The requested regime or parameter combination is not supported."""
