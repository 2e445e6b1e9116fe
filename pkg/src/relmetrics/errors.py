"""Semantic exception hierarchy shared by all relmetrics modules."""


class RelMetricsError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(RelMetricsError, ValueError):
    """A parameter is outside its documented range (bad exponent, negative input, ...)."""


class EvaluationError(RelMetricsError):
    """A user-supplied scalar function failed or returned an out-of-contract value."""


class DegenerateWeightError(RelMetricsError):
    """The weight function vanished at distinct points, so the relative distance is undefined."""


class OutsideDomainError(RelMetricsError, ValueError):
    """A point lies outside the domain (or is the point at infinity where it is not allowed)."""


class InvalidDomainError(RelMetricsError, ValueError):
    """The domain specification itself is unusable (empty boundary, too few boundary points, ...)."""


class ConfigError(RelMetricsError, ValueError):
    """A search configuration violates its invariants."""


class QuadratureError(RelMetricsError, ArithmeticError):
    """Adaptive integration failed to reach the requested tolerance."""
