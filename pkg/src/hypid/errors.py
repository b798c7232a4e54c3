"""Exception types raised across the package."""


class HypidError(Exception):
    """Base class for every error raised by hypid."""


class DomainError(HypidError, ValueError):
    """An argument lies outside the domain of the operation (including NaN)."""


class DegenerateConfigurationError(HypidError, ValueError):
    """Coincident points or a 0/0 cross-ratio."""


class CrossingGeodesicsError(DegenerateConfigurationError):
    """Two geodesics meet, so their distance is not defined."""


class NonHyperbolicError(HypidError, ValueError):
    """A matrix or trace is elliptic, parabolic or numerically parabolic."""


class RogersRangeError(HypidError, AssertionError):
    """A Rogers dilogarithm argument produced by a summand left [0, 1]."""


class SingularTermError(HypidError, ArithmeticError):
    """A series term hits a pole."""


class QuadratureError(HypidError, RuntimeError):
    """Adaptive quadrature failed to meet its tolerance.

    The partial result is kept on ``result`` so callers can inspect it.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class BudgetExceededError(HypidError, RuntimeError):
    """An enumeration ran past its exploration budget without certifying."""


class CutoffTooLargeError(BudgetExceededError):
    """The requested cutoff needs more depth than the configured budget."""


class BQConditionError(HypidError, ValueError):
    """The seed does not satisfy (or could not be shown to satisfy) BQ."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
