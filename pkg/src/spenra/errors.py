"""Exception hierarchy shared across the library."""


class SpenraError(Exception):
    """Base class for all library-specific errors."""


class OrderTooLarge(SpenraError):
    """The requested autoregressive order does not fit in the series."""


class TooShort(SpenraError):
    """The series is too short for the requested statistic."""


class InsufficientData(SpenraError):
    """Not enough retained observations for cross-validation."""


class EmptyAfterLeaveOut(SpenraError):
    """Every training block was removed by the leave-out set."""


class DegenerateWeights(SpenraError):
    """All unnormalized kernel weights underflowed; bandwidths are pathological."""


class OptimizerFailure(SpenraError):
    """No optimizer start produced a finite cross-validation score."""


class QuadratureNonConvergence(SpenraError):
    """Adaptive quadrature could not reach the requested tolerance."""


class MissingTimestamps(SpenraError):
    """The operation needs event times but the series carries none."""


class NoMatches(SpenraError):
    """Sample entropy found no template matches; the tolerance is too small."""


class IsolatedVector(SpenraError):
    """A leave-one-out count is zero for some embedding vector."""


class AmbiguousState(SpenraError):
    """A past value of exactly zero has no defined sign-state."""


class NonFiniteState(SpenraError):
    """The ODE trajectory blew up (non-finite state encountered)."""


class NoEvents(SpenraError):
    """The integrated signal never reached the firing threshold."""
