"""Input validation helpers shared by the estimators and the CLI."""

import numbers

import numpy as np
from sklearn.utils.validation import column_or_1d

from .aperiodic import HOLDS, SamplingSchedule
from .exceptions import InvalidScheduleError
from .lti_core import TransferFunction


def check_hold(hold):
    if hold not in HOLDS:
        raise ValueError(f"hold must be one of {HOLDS}, got {hold!r}")
    return hold


def check_system(num, den) -> TransferFunction:
    """Coerce coefficient lists (or an existing system) to a TransferFunction."""
    if isinstance(num, TransferFunction):
        return num
    return TransferFunction(column_or_1d(np.asarray(num, dtype=float)),
                            column_or_1d(np.asarray(den, dtype=float)))


def check_positive(value, name):
    if not isinstance(value, numbers.Real) or not np.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")
    return float(value)


def check_nonnegative(value, name):
    if not isinstance(value, numbers.Real) or not np.isfinite(value) or value < 0:
        raise ValueError(f"{name} must be a nonnegative finite number, got {value!r}")
    return float(value)


def check_schedule(instants) -> SamplingSchedule:
    if isinstance(instants, SamplingSchedule):
        return instants
    return SamplingSchedule(column_or_1d(np.asarray(instants, dtype=float)))


def check_inputs(inputs, length=None) -> np.ndarray:
    """Finite 1-d float array, optionally of a required length."""
    u = column_or_1d(np.asarray(inputs, dtype=float))
    if not np.all(np.isfinite(u)):
        raise ValueError("inputs must be finite")
    if length is not None and u.size != length:
        raise InvalidScheduleError(f"expected {length} inputs, got {u.size}")
    return u
