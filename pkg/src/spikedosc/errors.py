"""Exception hierarchy shared by every module."""


class SpikedOscError(Exception):
    """Base class for library errors."""


class DomainError(SpikedOscError, ValueError):
    """An argument lies outside the domain of the function."""


class PoleError(DomainError):
    """A parameter sits on (or within 1e-8 of) a pole of a gamma factor or series denominator."""


class DivergenceError(DomainError):
    """The requested series does not converge for these arguments."""


class RangeError(SpikedOscError, OverflowError):
    """The result is not representable as a double, even after log-space recombination."""


class NonConvergenceError(SpikedOscError, ArithmeticError):
    """The iteration budget ran out before the stopping rule fired.

    The best estimate reached so far is kept on ``estimate`` (may be None).
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate
