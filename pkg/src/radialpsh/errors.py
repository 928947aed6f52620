"""Exception hierarchy shared by every module."""


class RadialPshError(Exception):
    """Base class for all errors raised by radialpsh."""


class DomainError(RadialPshError, ValueError):
    """Argument outside the domain of a weight or functional."""


class PoleError(RadialPshError, ValueError):
    """Composition hits a zero of the weight where it is undefined."""


class IntegrandError(RadialPshError, ArithmeticError):
    """An integrand returned a non-finite sample."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class EstimationError(RadialPshError, RuntimeError):
    """A fit, extrapolation or bisection could not produce an estimate."""


class PreconditionError(RadialPshError, ValueError):
    """Inputs violate the precondition of an operation."""


class ConsistencyError(RadialPshError, RuntimeError):
    """Two independent routes to the same verdict disagree."""


class ConfigError(RadialPshError, ValueError):
    """Invalid configuration value or unknown configuration key."""
