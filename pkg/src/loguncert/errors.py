"""Exception hierarchy shared by every module of the package."""

__all__ = [
    "LogUncertError",
    "InvalidDimension",
    "InvalidResolution",
    "DimensionMismatch",
    "ZeroFunction",
    "SingularExponent",
    "NonIntegrableWeight",
    "UnsupportedExponent",
    "OutOfRange",
    "InconsistentParameters",
    "InvalidParameters",
    "EqualityHypothesisViolated",
    "StepOutsideDomain",
    "BudgetExhausted",
    "NumericalFailure",
    "ConfigError",
]


class LogUncertError(ValueError):
    """Base class for all domain errors raised by :mod:`loguncert`."""


class InvalidDimension(LogUncertError):
    pass


class InvalidResolution(LogUncertError):
    pass


class DimensionMismatch(LogUncertError):
    pass


class ZeroFunction(LogUncertError):
    pass


class SingularExponent(LogUncertError):
    pass


class NonIntegrableWeight(LogUncertError):
    pass


class UnsupportedExponent(LogUncertError):
    pass


class OutOfRange(LogUncertError):
    """A parameter lies outside the admissible range of a formula."""


class InconsistentParameters(LogUncertError):
    pass


class InvalidParameters(LogUncertError):
    pass


class EqualityHypothesisViolated(LogUncertError):
    """``F_0 = k_0 G_0`` does not hold for the supplied family and profile."""


class StepOutsideDomain(LogUncertError):
    pass


class BudgetExhausted(LogUncertError):
    pass


class NumericalFailure(LogUncertError):
    pass


class ConfigError(LogUncertError):
    pass
