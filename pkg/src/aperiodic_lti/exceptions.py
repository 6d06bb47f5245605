"""Exception and warning types raised by the package."""


class AperiodicLTIError(Exception):
    """Base class for all errors raised by aperiodic_lti."""


class InvalidSystemError(AperiodicLTIError, ValueError):
    """The transfer function is not a valid strictly-proper SISO system."""


class RootFindingError(AperiodicLTIError):
    """The polynomial root finder failed to converge."""


class ExpmOverflowError(AperiodicLTIError, OverflowError):
    """exp(M t) cannot be represented in double precision."""


class InvalidScheduleError(AperiodicLTIError, ValueError):
    """Sampling instants are not strictly increasing, or lengths mismatch."""


class InadmissibleSequenceError(AperiodicLTIError):
    """A sampling window makes the vectors G_0 ... G_{n-1} linearly dependent.

    Attributes
    ----------
    delta_magnitude : float
        Hadamard-scaled determinant magnitude of the offending window.
    step : int or None
        Step index ``k`` of the window, when known.
    """

    def __init__(self, message, delta_magnitude=float("nan"), step=None):
        super().__init__(message)
        self.delta_magnitude = delta_magnitude
        self.step = step


class ScheduleGenerationError(AperiodicLTIError):
    """Rejection sampling of an admissible schedule gave up."""


class IllConditionedWindowWarning(UserWarning):
    """Coefficients were computed, but the window is close to degenerate."""


class ClusteredRootsWarning(UserWarning):
    """Nearby roots were merged into a multiple root."""


class ConfigError(AperiodicLTIError, ValueError):
    """A run configuration is malformed or references a missing file."""
