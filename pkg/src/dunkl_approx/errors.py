"""Exception types raised by dunkl_approx."""


class DunklApproxError(Exception):
    """Base class for all package errors."""


class DomainError(DunklApproxError, ValueError):
    """Argument outside the mathematical domain of a function."""


class NonConvergence(DunklApproxError, ArithmeticError):
    """A series did not reach its tail tolerance within max_terms."""


class QuadratureFailure(DunklApproxError, ArithmeticError):
    """Adaptive quadrature could not meet its tolerance within budget."""


class GrowthViolation(DunklApproxError, ValueError):
    """A target function exceeded its declared growth envelope."""


class ConfigError(DunklApproxError, ValueError):
    """Invalid experiment configuration."""
