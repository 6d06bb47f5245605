"""Reference oracles and random instance generators.

The oracles here deliberately avoid the library's own realization and matrix
exponential: they build a controllable canonical form with
:func:`scipy.signal.tf2ss` and exponentiate with :func:`scipy.linalg.expm`, so
a shared bug cannot make both sides agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import expm as _sp_expm
from scipy.signal import tf2ss

from ._thresholds import DEFAULT_THRESHOLDS, Thresholds
from .admissibility import check_generic
from .aperiodic import SamplingSchedule, _check_hold
from .exceptions import InvalidScheduleError, ScheduleGenerationError
from .lti_core import Spectrum, TransferFunction

__all__ = [
    "ComparisonResult",
    "compare",
    "convolution_oracle",
    "state_update_oracle",
    "random_stable_system",
    "random_admissible_schedule",
    "REL_FLOOR",
]

# absolute floor on the reference magnitude in relative errors
REL_FLOOR = 1e-12
# relative gap below which a delayed instant counts as coinciding with a pulse
_COINCIDE = 1e-12


@dataclass(frozen=True)
class ComparisonResult:
    max_abs_error: float
    max_rel_error: float
    index_of_worst: int
    tolerance_used: float
    passed: bool

    def to_dict(self) -> dict:
        return {"max_abs_error": self.max_abs_error, "max_rel_error": self.max_rel_error,
                "index_of_worst": self.index_of_worst, "tolerance_used": self.tolerance_used,
                "pass": self.passed}


def compare(y, y_ref, tolerance: float = 1e-8) -> ComparisonResult:
    """Max error of ``y`` against ``y_ref`` relative to ``max(|y_ref|_inf, REL_FLOOR)``."""
    y = np.asarray(y, dtype=float).ravel()
    y_ref = np.asarray(y_ref, dtype=float).ravel()
    if y.shape != y_ref.shape:
        raise ValueError(f"length mismatch: {y.size} vs {y_ref.size}")
    if y.size == 0:
        return ComparisonResult(0.0, 0.0, -1, tolerance, True)
    err = np.abs(y - y_ref)
    worst = int(np.argmax(err))
    scale = max(float(np.max(np.abs(y_ref))), REL_FLOOR)
    rel = float(err[worst]) / scale
    if not np.all(np.isfinite(y)):
        rel, worst = np.inf, int(np.flatnonzero(~np.isfinite(y))[0])
    return ComparisonResult(float(err[worst]), rel, worst, tolerance, bool(rel <= tolerance))


def _state_space(tf: TransferFunction, integrate=False):
    den = tf.den if not integrate else np.append(tf.den, 0.0)
    A, B, C, _ = tf2ss(tf.num, den)
    return A, B[:, 0], C[0]


def convolution_oracle(tf: TransferFunction, sched: SamplingSchedule, inputs: Sequence[float],
                       hold: str = "impulse", Td: float = 0.0) -> np.ndarray:
    """Direct convolution sum over the sampling instants.

    ``y_k = sum_{i<=k} h(t_k - t_i - Td) u_i`` for impulses, and
    ``sum_{i<=k} h_s(t_k - t_i - Td) (u_i - u_{i-1})`` behind a hold, with
    causal responses and ``u_{-1} = 0``.
    """
    _check_hold(hold)
    u = np.asarray(inputs, dtype=float).ravel()
    if u.size != len(sched):
        raise InvalidScheduleError(f"{u.size} inputs for {len(sched)} instants")
    if Td < 0:
        raise ValueError("dead time must be nonnegative")
    A, B, C = _state_space(tf, integrate=(hold == "zoh"))
    w = u if hold == "impulse" else np.diff(u, prepend=0.0)
    t = sched.instants
    K = u.size
    y = np.zeros(K)
    if Td == 0.0:
        # columns are the states of every earlier pulse, advanced one period at a time;
        # each y_k is still the explicit sum of the individual responses
        S = np.zeros((A.shape[0], 0))
        for k in range(K):
            if k:
                S = _sp_expm(A * (t[k] - t[k - 1])) @ S
            S = np.column_stack([S, B])
            y[k] = (C @ S) @ w[:k + 1]
        return y
    for k in range(K):
        acc = 0.0
        for i in range(k + 1):
            tau = t[k] - t[i] - Td
            # a delay of whole periods lands on a pulse up to roundoff in the instants
            if -_COINCIDE * max(1.0, abs(t[k])) < tau < 0:
                tau = 0.0
            if tau >= 0:
                acc += (C @ _sp_expm(A * tau) @ B) * w[i]
        y[k] = acc
    return y


def state_update_oracle(tf: TransferFunction, sched: SamplingSchedule, inputs: Sequence[float]
                        ) -> np.ndarray:
    """Classical zero-order-hold state update.

    ``x_{k+1} = Phi_k x_k + Gamma_k u_k`` with ``Phi_k, Gamma_k`` from the
    augmented exponential ``exp([[A, B], [0, 0]] T_k)``; output ``y_k = C x_k``.
    """
    u = np.asarray(inputs, dtype=float).ravel()
    if u.size != len(sched):
        raise InvalidScheduleError(f"{u.size} inputs for {len(sched)} instants")
    A, B, C = _state_space(tf)
    n = A.shape[0]
    M = np.zeros((n + 1, n + 1))
    M[:n, :n] = A
    M[:n, n] = B
    x = np.zeros(n)
    y = np.zeros(u.size)
    periods = sched.periods
    for k in range(u.size):
        y[k] = C @ x
        if k < periods.size:
            E = _sp_expm(M * periods[k])
            x = E[:n, :n] @ x + E[:n, n] * u[k]
    return y


def random_stable_system(n: int, seed, min_separation: float = 0.05,
                         max_imag: float = 5.0) -> TransferFunction:
    """Deterministic random strictly proper system with poles in the open left half-plane.

    Real parts are uniform in ``[-3, -0.05]``; a random number of complex pairs
    have imaginary parts in ``(0, max_imag]``. Poles are kept at least
    ``min_separation`` apart so that root finding returns them reliably.
    The numerator has random degree below ``n``.
    """
    if not 1 <= n <= 8:
        raise ValueError(f"n must be in [1, 8], got {n}")
    rng = np.random.default_rng(seed)
    n_pairs = int(rng.integers(0, n // 2 + 1))
    poles: list = []

    def far(z):
        return all(abs(z - q) >= min_separation for q in poles) and (
            z.imag == 0 or abs(z - z.conjugate()) >= min_separation)

    while len(poles) < 2 * n_pairs:
        z = complex(rng.uniform(-3.0, -0.05), rng.uniform(min_separation, max_imag))
        if far(z):
            poles += [z, z.conjugate()]
    while len(poles) < n:
        z = complex(rng.uniform(-3.0, -0.05), 0.0)
        if far(z):
            poles.append(z)
    deg = int(rng.integers(0, n))
    num = rng.normal(size=deg + 1)
    num[0] = np.copysign(max(abs(num[0]), 0.1), num[0])
    return TransferFunction.from_poles(poles, num)


def random_admissible_schedule(sp: Spectrum, K: int, seed, T_range=(0.1, 1.5), t0: float = 0.0,
                               max_rejections: int = 10_000,
                               thresholds: Thresholds = DEFAULT_THRESHOLDS,
                               accept=("admissible", "marginal")):
    """Schedule of ``K`` periods whose every sliding ``n``-window passes :func:`check_generic`.

    Periods are drawn uniformly from ``T_range``. The determinant of a window
    involves its first ``n - 1`` periods only, so a draw is redrawn when the
    last ``n - 1`` periods, itself included, fail as a window head.

    Returns
    -------
    schedule : SamplingSchedule
    rejections : int
        Number of redrawn periods.

    Raises
    ------
    ScheduleGenerationError
        After ``max_rejections`` redraws.
    """
    n = sp.n
    if K < n:
        raise ValueError(f"need K >= n = {n}, got {K}")
    lo, hi = map(float, T_range)
    if not 0 < lo < hi:
        raise ValueError(f"bad T_range {T_range!r}")
    rng = np.random.default_rng(seed)
    periods: list = []
    rejections = 0
    while len(periods) < K:
        T = float(rng.uniform(lo, hi))
        # only the leading n - 1 periods of a window enter the determinant, so a
        # new draw is judged as the last of those; the final period is a dummy
        lead = (periods + [T])[-(n - 1):] if n > 1 else []
        if len(lead) == n - 1 and n > 1 and \
                check_generic(sp, lead + [T], thresholds).verdict not in accept:
            rejections += 1
            if rejections > max_rejections:
                raise ScheduleGenerationError(
                    f"gave up after {rejections} rejections with {len(periods)} of {K} periods")
            continue
        periods.append(T)
    return SamplingSchedule.from_periods(periods, t0), rejections
