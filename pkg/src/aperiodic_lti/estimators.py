"""Estimator-style wrappers over the functional API.

``fit`` takes the sampling pattern and computes the recursion coefficients;
``predict`` runs the recursion on an input sequence. Hyperparameters are the
continuous system and the hold; nothing is learned from data.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import _checks
from .aperiodic import model_coefficients, simulate
from .periodic import dead_time_model

__all__ = ["AperiodicDiscretizer", "PeriodicDiscretizer"]


class AperiodicDiscretizer(BaseEstimator):
    """Per-step recursion coefficients for a given sampling schedule.

    Parameters
    ----------
    num, den : array_like
        Transfer function coefficients, highest degree first.
    hold : {"impulse", "zoh"}
    fail_fast : bool
        Raise on the first inadmissible window during ``fit``; otherwise such
        steps are kept with status ``"inadmissible"``.

    Attributes
    ----------
    system_ : TransferFunction
    schedule_ : SamplingSchedule
    coefficients_ : list of StepCoefficients
        One entry per step ``k = n .. K``.
    """

    def __init__(self, num=(1.0,), den=(1.0, 1.0), hold="impulse", fail_fast=True):
        self.num = num
        self.den = den
        self.hold = hold
        self.fail_fast = fail_fast

    def fit(self, instants, y=None):
        """Compute the coefficients for the sampling instants ``instants``."""
        _checks.check_hold(self.hold)
        self.system_ = _checks.check_system(self.num, self.den)
        self.schedule_ = _checks.check_schedule(instants)
        self.coefficients_ = model_coefficients(self.system_, self.schedule_, self.hold,
                                                fail_fast=self.fail_fast)
        return self

    def predict(self, inputs):
        """Outputs at the fitted instants for inputs applied at the same instants."""
        check_is_fitted(self, "coefficients_")
        u = _checks.check_inputs(inputs, len(self.schedule_))
        return simulate(self.system_, self.schedule_, u, self.hold)

    @property
    def f_(self):
        check_is_fitted(self, "coefficients_")
        return np.array([c.f for c in self.coefficients_])

    @property
    def g_(self):
        check_is_fitted(self, "coefficients_")
        return np.array([c.g for c in self.coefficients_])


class PeriodicDiscretizer(BaseEstimator):
    """Constant-coefficient model for period ``T0``, optionally with dead time.

    Attributes
    ----------
    model_ : PeriodicModel
    a_, b_ : ndarray
    """

    def __init__(self, num=(1.0,), den=(1.0, 1.0), T0=1.0, hold="zoh", dead_time=0.0):
        self.num = num
        self.den = den
        self.T0 = T0
        self.hold = hold
        self.dead_time = dead_time

    def fit(self, X=None, y=None):
        """Compute ``a_i`` and ``b_j``; ``X`` is ignored."""
        _checks.check_hold(self.hold)
        T0 = _checks.check_positive(self.T0, "T0")
        Td = _checks.check_nonnegative(self.dead_time, "dead_time")
        self.system_ = _checks.check_system(self.num, self.den)
        self.model_ = dead_time_model(self.system_, T0, Td, self.hold)
        self.a_ = self.model_.a
        self.b_ = self.model_.b
        return self

    def predict(self, inputs):
        """Outputs ``y_0 .. y_K`` from rest for inputs ``u_0 .. u_K``."""
        check_is_fitted(self, "model_")
        return self.model_.simulate(_checks.check_inputs(inputs))
