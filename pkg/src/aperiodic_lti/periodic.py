"""Constant-period discretization.

With a fixed period ``T0`` the recursion coefficients no longer depend on
``k``:

    y_k = sum_{i=1}^{n} a_i y_{k-i} + sum_j b_j u_{k-j-p}

The ``a_i`` are signed elementary symmetric functions of the discrete poles
``exp(lambda_j T0)``, so ``1 - sum_i a_i z^-i`` has exactly those roots. The
pulse-transfer denominator coefficients are ``-a_i``. ``p`` is the input shift
caused by a dead time ``Td``, with ``(p - 1) T0 < Td <= p T0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._thresholds import DEFAULT_THRESHOLDS, Thresholds, hadamard_ratio
from .admissibility import AdmissibilityReport, Finding, _classify, _pi_distance
from .aperiodic import HOLDS, _check_hold
from .exceptions import InadmissibleSequenceError, InvalidScheduleError
from .lti_core import IMAG_TOL, Spectrum, TransferFunction, realize, spectrum, step_realization

__all__ = [
    "PeriodicModel",
    "a_coeffs",
    "b_coeffs",
    "gain_identity",
    "periodic_model",
    "dead_time_model",
    "check_periodic_resonance",
    "sweep",
    "TABLE1_SYSTEM",
    "TABLE1_PERIODS",
    "PERIODIC_PI_MULTIPLE",
]

PERIODIC_PI_MULTIPLE = "periodic_pi_multiple"

# 1 / ((1 + 10 s)(1 + 7.5 s)(1 + 5 s)), unit static gain
TABLE1_SYSTEM = TransferFunction([1.0], np.polymul(np.polymul([10.0, 1.0], [7.5, 1.0]), [5.0, 1.0]))
TABLE1_PERIODS = (2.0, 4.0, 6.0, 8.0, 10.0, 12.0)

# relative tolerance for recognizing Td as a whole number of periods
_SHIFT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PeriodicModel:
    """Constant-coefficient recursion of a system sampled every ``T0``.

    Attributes
    ----------
    a : ndarray, shape (n,)
        Output coefficients ``a_1 .. a_n``.
    b : ndarray
        Input coefficients ``b_0 .. b_{n-1}`` (impulse) or ``b_0 .. b_n``
        (zoh, where ``b_0 = 0`` unless the dead time is fractional).
    dead_shift : int
        Input index shift ``p``.
    static_gain : float
        ``G(0)`` of the continuous system.
    """

    T0: float
    a: np.ndarray
    b: np.ndarray
    hold: str
    dead_shift: int = 0
    Td: float = 0.0
    static_gain: float = math.nan

    @property
    def n(self) -> int:
        return self.a.size

    def simulate(self, inputs: Sequence[float]) -> np.ndarray:
        """Outputs ``y_0 .. y_K`` from rest; exact from the first step."""
        u = np.asarray(inputs, dtype=float).ravel()
        n, p, m = self.n, self.dead_shift, self.b.size
        y = np.zeros(u.size)
        # zero history on both sides
        up = np.concatenate([np.zeros(m + p), u])
        yp = np.zeros(n + u.size)
        for k in range(u.size):
            ks = k + n
            yk = self.a @ yp[ks - n:ks][::-1]
            # u_{k-p-j} sits at up[k + m - j]
            yk += self.b @ up[k + 1:k + m + 1][::-1]
            yp[ks] = y[k] = yk
        return y

    def to_dict(self) -> dict:
        return {
            "T0": self.T0,
            "hold": self.hold,
            "a": self.a.tolist(),
            "b": self.b.tolist(),
            "dead_shift": self.dead_shift,
            "Td": self.Td,
            "static_gain": self.static_gain,
        }


def _discrete_poles(sp: Spectrum, T0: float) -> np.ndarray:
    return np.array([np.exp(lam * T0) for lam, m in sp.eigenvalues for _ in range(m)])


def a_coeffs(sp: Spectrum, T0: float) -> np.ndarray:
    """``a_i = (-1)^(i-1) e_i(exp(lambda_1 T0), ..., exp(lambda_n T0))``.

    Obtained by expanding ``prod (x - phi_j)``, repeated poles repeated by
    multiplicity.
    """
    if not T0 > 0:
        raise ValueError(f"T0 must be positive, got {T0!r}")
    coef = np.poly(_discrete_poles(sp, T0))
    imag = np.max(np.abs(np.imag(coef)), initial=0.0)
    if imag > IMAG_TOL * max(1.0, float(np.max(np.abs(coef)))):
        raise ArithmeticError(f"a_i have imaginary residue {imag:.3e}; spectrum not conjugate-closed")
    return -np.real(coef[1:]).astype(float)


def _stepped(resp, T0, shift):
    """``w(m) = resp(m T0 - shift) - resp((m - 1) T0 - shift)`` with causal resp."""
    def w(m):
        hi, lo = m * T0 - shift, (m - 1) * T0 - shift
        return (resp(hi) if hi >= 0 else 0.0) - (resp(lo) if lo >= 0 else 0.0)
    return w


def _sampled(resp, T0, shift):
    def w(m):
        t = m * T0 - shift
        return resp(t) if t >= 0 else 0.0
    return w


def _b_from_weights(w, a, p, count):
    # b_j = sum_{i=0}^{n} (-a_i) w(p + j - i) with a_0 = -1
    a_ext = np.concatenate([[-1.0], a])
    # + 0.0 turns a signed zero into 0.0
    return 0.0 + np.array([-sum(a_ext[i] * w(p + j - i) for i in range(a_ext.size))
                     for j in range(count)])


def _check_admissible(sp, T0, thresholds):
    rep = check_periodic_resonance(sp, T0, thresholds)
    if not rep.admissible:
        raise InadmissibleSequenceError(
            f"T0 = {T0!r} is inadmissible: "
            + ", ".join(f.condition for f in rep.resonances),
            delta_magnitude=rep.delta_magnitude)
    return rep


def b_coeffs(tf: TransferFunction, T0: float, hold: str = "zoh", a: Sequence[float] = None,
             thresholds: Thresholds = DEFAULT_THRESHOLDS) -> np.ndarray:
    """Input coefficients for an impulse train (``b_0 .. b_{n-1}``) or a hold (``b_0 .. b_n``).

    Impulse: ``b_j = h(j T0) - sum_{i=1}^{j} a_i h((j - i) T0)``. With a hold the
    samples of ``h`` are replaced by the step-response increments
    ``h_s(m T0) - h_s((m - 1) T0)``.

    Raises
    ------
    InadmissibleSequenceError
        If ``T0`` is resonant.
    """
    _check_hold(hold)
    sp = spectrum(tf)
    _check_admissible(sp, T0, thresholds)
    a = a_coeffs(sp, T0) if a is None else np.asarray(a, dtype=float)
    return _b(tf, T0, hold, a, 0.0, 0)


def _b(tf, T0, hold, a, shift, p):
    n = tf.n
    if hold == "impulse":
        r = realize(tf)
        return _b_from_weights(_sampled(r.response, T0, shift), a, p, n)
    sr = step_realization(tf)
    return _b_from_weights(_stepped(sr.response, T0, shift), a, p, n + 1)


def gain_identity(m: PeriodicModel) -> float:
    """Residual ``sum b - K (1 - sum a)`` of the static-gain identity.

    In terms of the pulse-transfer denominator ``a'_i = -a_i`` this is
    ``sum b - K (1 + sum a')``. Zero up to roundoff for any stable system
    without a pole at the origin.
    """
    return float(np.sum(m.b) - m.static_gain * (1.0 - np.sum(m.a)))


def periodic_model(tf: TransferFunction, T0: float, hold: str = "zoh",
                   thresholds: Thresholds = DEFAULT_THRESHOLDS) -> PeriodicModel:
    """Constant-period model without dead time."""
    return dead_time_model(tf, T0, 0.0, hold, thresholds)


def _dead_shift(T0, Td):
    """``p`` with ``(p - 1) T0 < Td <= p T0`` and whether ``Td = p T0``."""
    q = Td / T0
    p = math.ceil(q)
    if abs(q - round(q)) <= _SHIFT_TOL * max(1.0, q):
        return int(round(q)), True
    return int(p), False


def dead_time_model(tf: TransferFunction, T0: float, Td: float, hold: str = "zoh",
                    thresholds: Thresholds = DEFAULT_THRESHOLDS) -> PeriodicModel:
    """Constant-period model of ``G(s) exp(-Td s)``.

    When ``Td`` is a whole number ``p`` of periods the coefficients are those
    of the undelayed model and only the input index shifts. Otherwise the
    ``b_j`` are recomputed from the delayed response samples; ``a_i`` never
    change.

    Raises
    ------
    ValueError
        If ``Td`` is negative.
    InadmissibleSequenceError
        If ``T0`` is resonant.
    """
    _check_hold(hold)
    if not T0 > 0 or not np.isfinite(T0):
        raise InvalidScheduleError(f"T0 must be positive and finite, got {T0!r}")
    if not Td >= 0 or not np.isfinite(Td):
        raise ValueError(f"dead time must be nonnegative and finite, got {Td!r}")
    sp = spectrum(tf)
    _check_admissible(sp, T0, thresholds)
    a = a_coeffs(sp, T0)
    p, whole = _dead_shift(T0, Td)
    if whole:
        b = _b(tf, T0, hold, a, 0.0, 0)
    else:
        b = _b(tf, T0, hold, a, Td, p)
    return PeriodicModel(float(T0), a, b, hold, p, float(Td), tf.static_gain)


def check_periodic_resonance(sp: Spectrum, T0: float,
                             thresholds: Thresholds = DEFAULT_THRESHOLDS) -> AdmissibilityReport:
    """Resonance check for a constant period.

    With equal periods the only named degeneracy is ``b T0`` hitting a
    multiple of pi for some complex pair; the oblique-plane case cannot
    arise. The scaled determinant over ``0, T0, ..., (n-1) T0`` is reported
    as a cross-check and also catches coinciding discrete poles.
    """
    if not T0 > 0:
        raise ValueError(f"T0 must be positive, got {T0!r}")
    findings = []
    for _, b, _ in sp.complex_pairs():
        if _pi_distance(b * T0) < thresholds.angle:
            findings.append(Finding(PERIODIC_PI_MULTIPLE, {
                "b": b, "T0": T0, "angle": b * T0,
                "multiple_of_pi": round(b * T0 / math.pi)}))
    scaled = hadamard_ratio(sp.real_basis(T0 * np.arange(sp.n)))
    return AdmissibilityReport(_classify(scaled, findings, thresholds), scaled,
                               tuple(findings), thresholds)


def sweep(tf: TransferFunction, periods: Sequence[float], hold: str = "zoh",
          Td: float = 0.0) -> list:
    """Models for each period in ``periods``."""
    if hold not in HOLDS:
        raise ValueError(f"hold must be one of {HOLDS}, got {hold!r}")
    return [dead_time_model(tf, float(T0), Td, hold) for T0 in periods]
