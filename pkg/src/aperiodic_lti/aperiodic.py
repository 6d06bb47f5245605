"""Input-output recursion for aperiodically sampled LTI systems.

At step ``k`` the output obeys

    y_k = sum_{i=1}^{n} f_i^k y_{k-i} + sum_j g_j^k u_{k-j}

where the ``f_i^k`` depend only on the poles and on the last ``n`` sampling
periods, and the ``g_j^k`` also depend on the zeros. With impulse inputs
``j = 0 .. n-1``; with a zeroth-order hold ``j = 0 .. n``.

Negative arguments of ``h`` are evaluated causally (``h(tau) = 0`` for
``tau < 0``, ``h(0) = h(0+)``), which is what makes the recursion reproduce the
convolution sum exactly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ._thresholds import DEFAULT_THRESHOLDS, Thresholds, hadamard_ratio
from .exceptions import (
    IllConditionedWindowWarning,
    InadmissibleSequenceError,
    InvalidScheduleError,
)
from .lti_core import (
    CompanionRealization,
    Spectrum,
    TransferFunction,
    realize,
    spectrum,
    step_realization,
)

__all__ = [
    "SamplingSchedule",
    "StepCoefficients",
    "g_vectors",
    "f_coeffs_solve",
    "f_coeffs_closed",
    "g_coeffs_impulse",
    "g_coeffs_zoh",
    "step_coefficients",
    "model_coefficients",
    "simulate",
    "HOLDS",
]

HOLDS = ("impulse", "zoh")


def _check_hold(hold):
    if hold not in HOLDS:
        raise ValueError(f"hold must be one of {HOLDS}, got {hold!r}")


@dataclass(frozen=True, eq=False)
class SamplingSchedule:
    """Strictly increasing sampling instants ``t_0 < t_1 < ... < t_K``."""

    instants: np.ndarray

    def __init__(self, instants: Sequence[float]):
        t = np.asarray(instants, dtype=float).ravel()
        if t.size == 0:
            raise InvalidScheduleError("schedule has no instants")
        if not np.all(np.isfinite(t)):
            raise InvalidScheduleError("instants must be finite")
        if np.any(np.diff(t) <= 0.0):
            bad = int(np.flatnonzero(np.diff(t) <= 0.0)[0]) + 1
            raise InvalidScheduleError(f"instants must increase strictly (index {bad})")
        t.setflags(write=False)
        object.__setattr__(self, "instants", t)

    @classmethod
    def from_periods(cls, periods: Sequence[float], t0: float = 0.0) -> "SamplingSchedule":
        periods = np.asarray(periods, dtype=float).ravel()
        if np.any(periods <= 0.0):
            raise InvalidScheduleError("periods must be positive")
        return cls(np.concatenate([[t0], t0 + np.cumsum(periods)]))

    @classmethod
    def constant(cls, T0: float, K: int, t0: float = 0.0) -> "SamplingSchedule":
        """``K`` equal periods; instants are ``t0 + k T0`` exactly."""
        if T0 <= 0:
            raise InvalidScheduleError("period must be positive")
        return cls(t0 + T0 * np.arange(K + 1))

    @property
    def periods(self) -> np.ndarray:
        """``[T_1, ..., T_K]`` with ``T_k = t_k - t_{k-1}``."""
        return np.diff(self.instants)

    @property
    def K(self) -> int:
        return self.instants.size - 1

    def __len__(self):
        return self.instants.size

    def window(self, k: int, n: int) -> np.ndarray:
        """Periods ``(T_{k-n+1}, ..., T_k)`` feeding the step-``k`` coefficients."""
        if k < n or k > self.K:
            raise IndexError(f"step {k} has no complete window of {n} periods")
        return self.periods[k - n:k]

    def to_dict(self) -> dict:
        return {"instants": [float(v) for v in self.instants]}

    @classmethod
    def from_dict(cls, doc: dict) -> "SamplingSchedule":
        """Parse ``{"instants": [...]}`` or ``{"periods": [...], "t0": t0}``."""
        if "instants" in doc and "periods" in doc:
            raise InvalidScheduleError("give either 'instants' or 'periods', not both")
        if "instants" in doc:
            return cls(doc["instants"])
        if "periods" in doc:
            return cls.from_periods(doc["periods"], float(doc.get("t0", 0.0)))
        raise InvalidScheduleError("schedule needs 'instants' or 'periods'")


@dataclass(frozen=True, eq=False)
class StepCoefficients:
    """Recursion coefficients valid at step ``k``.

    ``status`` is ``"ok"``, ``"marginal"`` (computed, but the window is close to
    degenerate) or ``"inadmissible"`` (``f`` and ``g`` are NaN).
    """

    k: int
    f: np.ndarray
    g: np.ndarray
    hold: str
    delta_magnitude: float = 1.0
    status: str = "ok"

    @property
    def marginal(self) -> bool:
        return self.status == "marginal"


# --------------------------------------------------------------------------
# f coefficients


def _alphas(periods):
    periods = np.asarray(periods, dtype=float).ravel()
    if np.any(periods <= 0.0) or not np.all(np.isfinite(periods)):
        raise InvalidScheduleError("periods must be positive and finite")
    return np.concatenate([[0.0], np.cumsum(periods)])


def g_vectors(r: CompanionRealization, periods: Sequence[float]) -> list:
    """``[G_0, ..., G_n]`` with ``G_0 = x0`` and ``G_i = exp(A alpha_i) x0``.

    ``alpha_i = z_1 + ... + z_i`` are the cumulative sums of ``periods``.
    """
    alphas = _alphas(periods)
    return [np.array(r.x0)] + [r.state(a) for a in alphas[1:]]


def _basis_spectrum(r: CompanionRealization) -> Spectrum:
    # the fundamental solutions depend on the poles only, which the companion row holds
    den = np.concatenate([[1.0], -r.A[-1, ::-1]])
    return spectrum(TransferFunction([1.0], den))


def _solve_from_vectors(G, sp, alphas, thresholds, k=None):
    # [G_0 .. G_{n-1}] is a fixed matrix times the fundamental-solution matrix, so
    # the scale-free measure of the latter decides admissibility; row scaling of G
    # itself cannot tell a roundoff-only row from a genuine one
    n = len(G) - 1
    scaled = hadamard_ratio(sp.real_basis(alphas[:n]))
    where = f" at step {k}" if k is not None else ""
    if scaled < thresholds.inadmissible:
        raise InadmissibleSequenceError(
            f"G_0..G_{n - 1} are linearly dependent{where} (scaled |det| = {scaled:.3e})",
            delta_magnitude=scaled, step=k)
    # unknowns are ordered [f_n, ..., f_1]
    try:
        sol = np.linalg.solve(np.column_stack(G[:n]), G[n])
    except np.linalg.LinAlgError as exc:
        # only reachable with a pole-zero cancellation
        raise InadmissibleSequenceError(f"singular G matrix{where}", 0.0, k) from exc
    return sol[::-1].copy(), scaled


def _solve_basis(sp, alphas, thresholds, k=None):
    n = sp.n
    Phi = sp.real_basis(alphas)
    D = Phi[:, :n]
    scaled = hadamard_ratio(D)
    if scaled < thresholds.inadmissible:
        where = f" at step {k}" if k is not None else ""
        raise InadmissibleSequenceError(
            f"G_0..G_{n - 1} are linearly dependent{where} (scaled |det| = {scaled:.3e})",
            delta_magnitude=scaled, step=k)
    norms = np.linalg.norm(D, axis=0)
    # column j carries the coefficient of phi(alpha_j), which is f_{n-j}
    x = np.linalg.solve(D / norms, Phi[:, n]) / norms
    return x[::-1].copy(), scaled


def f_coeffs_solve(r: CompanionRealization, periods: Sequence[float],
                   thresholds: Thresholds = DEFAULT_THRESHOLDS) -> np.ndarray:
    """``[f_1, ..., f_n]`` from the linear system ``sum_i f_{n-i} G_i = G_n``.

    Raises
    ------
    InadmissibleSequenceError
        When the column matrix ``[G_0 ... G_{n-1}]`` is numerically singular.
        A close-to-singular but solvable window issues an
        :class:`IllConditionedWindowWarning` instead.
    """
    if len(periods) != r.n:
        raise ValueError(f"need {r.n} periods, got {len(periods)}")
    f, scaled = _solve_from_vectors(g_vectors(r, periods), _basis_spectrum(r), _alphas(periods),
                                    thresholds)
    if scaled < thresholds.marginal:
        warnings.warn(f"ill-conditioned window (scaled |det| = {scaled:.3e})",
                      IllConditionedWindowWarning, stacklevel=2)
    return f


def f_coeffs_closed(sp: Spectrum, periods: Sequence[float],
                    thresholds: Thresholds = DEFAULT_THRESHOLDS) -> np.ndarray:
    """``f_i = Delta_i / Delta`` from determinants of fundamental solutions.

    ``Delta = det[phi_l(alpha_j)]`` for ``j = 0 .. n-1``; ``Delta_i`` is the same
    determinant with the column of ``alpha_{n-i}`` replaced by ``phi(alpha_n)``.
    Depends on the poles only.
    """
    n = sp.n
    if len(periods) != n:
        raise ValueError(f"need {n} periods, got {len(periods)}")
    Phi = sp.real_basis(_alphas(periods))
    D = Phi[:, :n]
    scaled = hadamard_ratio(D)
    if scaled < thresholds.inadmissible:
        raise InadmissibleSequenceError(
            f"fundamental-solution determinant vanishes (scaled |Delta| = {scaled:.3e})",
            delta_magnitude=scaled)
    # common column scaling cancels in the ratios and keeps det in range
    norms = np.linalg.norm(D, axis=0)
    Ds = D / norms
    det = np.linalg.det(Ds)
    last = Phi[:, n]
    f = np.empty(n)
    for i in range(1, n + 1):
        col = n - i
        Di = Ds.copy()
        Di[:, col] = last / norms[col]
        f[i - 1] = np.linalg.det(Di) / det
    return f


# --------------------------------------------------------------------------
# g coefficients


def _causal(r: CompanionRealization) -> Callable[[float], float]:
    def resp(tau):
        return 0.0 if tau < 0 else r.response(tau)
    return resp


def _cached_causal(r: CompanionRealization) -> Callable[[float], float]:
    cache: dict = {}

    def resp(tau):
        if tau < 0:
            return 0.0
        val = cache.get(tau)
        if val is None:
            val = cache[tau] = r.response(tau)
        return val
    return resp


def _g_impulse(resp, t, k, f):
    n = len(f)
    g = np.empty(n)
    for j in range(n):
        tj = t[k - j]
        g[j] = resp(t[k] - tj) - sum(f[i - 1] * resp(t[k - i] - tj) for i in range(1, n + 1))
    return g


def _g_zoh(resp_s, t, k, f):
    n = len(f)

    def D(m, l):
        # h_s(t_m - t_{l+1}) vanishes once l + 1 > m
        second = resp_s(t[m] - t[l + 1]) if l + 1 <= m else 0.0
        return resp_s(t[m] - t[l]) - second

    g = np.empty(n + 1)
    for j in range(n + 1):
        l = k - j
        g[j] = D(k, l) - sum(f[i - 1] * D(k - i, l) for i in range(1, n + 1))
    return g


def _check_step(sched, k, n):
    if k < n or k > sched.K:
        raise IndexError(f"step {k} outside [{n}, {sched.K}]")


def g_coeffs_impulse(r: CompanionRealization, sched: SamplingSchedule, k: int,
                     f: Sequence[float]) -> np.ndarray:
    """Input coefficients ``g_0^k .. g_{n-1}^k`` for impulse inputs.

    ``g_j = h(t_k - t_{k-j}) - sum_i f_i h(t_{k-i} - t_{k-j})`` with causal ``h``.
    """
    f = np.asarray(f, dtype=float)
    _check_step(sched, k, f.size)
    return _g_impulse(_causal(r), sched.instants, k, f)


def g_coeffs_zoh(sr: CompanionRealization, sched: SamplingSchedule, k: int,
                 f: Sequence[float]) -> np.ndarray:
    """Input coefficients ``g_0^k .. g_n^k`` behind a zeroth-order hold.

    ``sr`` is the step realization (order ``n+1``). With
    ``D(m, l) = h_s(t_m - t_l) - h_s(t_m - t_{l+1})`` and causal ``h_s``,
    ``g_j = D(k, k-j) - sum_i f_i D(k-i, k-j)``.
    """
    f = np.asarray(f, dtype=float)
    _check_step(sched, k, f.size)
    return _g_zoh(_causal(sr), sched.instants, k, f)


# --------------------------------------------------------------------------
# whole-schedule evaluation


class _Evaluator:
    """Per-call caches of the responses of one system.

    ``f`` is solved on the fundamental-solution matrix rather than on the state
    vectors ``G_i``: the two systems share their solution, but the map from the
    basis to the companion state can be badly conditioned.
    """

    def __init__(self, tf, hold, thresholds):
        self.r = realize(tf)
        self.sp = spectrum(tf)
        self.n = tf.n
        self.hold = hold
        self.thresholds = thresholds
        self.resp = _cached_causal(self.r)
        self.resp_s = _cached_causal(step_realization(tf)) if hold == "zoh" else None

    def coefficients(self, sched, k, fail_fast=True):
        n = self.n
        alphas = _alphas(sched.window(k, n))
        try:
            f, scaled = _solve_basis(self.sp, alphas, self.thresholds, k)
        except InadmissibleSequenceError as exc:
            if fail_fast:
                raise
            m = n + (self.hold == "zoh")
            return StepCoefficients(k, np.full(n, np.nan), np.full(m, np.nan), self.hold,
                                    exc.delta_magnitude, "inadmissible")
        status = "marginal" if scaled < self.thresholds.marginal else "ok"
        if self.hold == "impulse":
            g = _g_impulse(self.resp, sched.instants, k, f)
        else:
            g = _g_zoh(self.resp_s, sched.instants, k, f)
        return StepCoefficients(k, f, g, self.hold, scaled, status)

    def convolve(self, t, u, k):
        if self.hold == "impulse":
            return sum(self.resp(t[k] - t[i]) * u[i] for i in range(k + 1))
        return sum(self.resp_s(t[k] - t[i]) * (u[i] - (u[i - 1] if i else 0.0))
                   for i in range(k + 1))


def step_coefficients(tf: TransferFunction, sched: SamplingSchedule, k: int,
                      hold: str = "impulse",
                      thresholds: Thresholds = DEFAULT_THRESHOLDS) -> StepCoefficients:
    """All recursion coefficients at step ``k`` (requires ``k >= n``)."""
    _check_hold(hold)
    ev = _Evaluator(tf, hold, thresholds)
    _check_step(sched, k, ev.n)
    return ev.coefficients(sched, k)


def model_coefficients(tf: TransferFunction, sched: SamplingSchedule, hold: str = "impulse",
                       fail_fast: bool = True,
                       thresholds: Thresholds = DEFAULT_THRESHOLDS) -> list:
    """Coefficients for every step ``k = n .. K``.

    With ``fail_fast=False`` inadmissible windows yield rows with status
    ``"inadmissible"`` instead of raising.
    """
    _check_hold(hold)
    ev = _Evaluator(tf, hold, thresholds)
    return [ev.coefficients(sched, k, fail_fast) for k in range(ev.n, sched.K + 1)]


def simulate(tf: TransferFunction, sched: SamplingSchedule, inputs: Sequence[float],
             hold: str = "impulse",
             thresholds: Thresholds = DEFAULT_THRESHOLDS) -> np.ndarray:
    """Outputs ``y_0 .. y_K`` of the sampled system from rest.

    The first ``n`` outputs (``n + 1`` with a hold) come from the direct
    convolution sum; the recursion takes over from there.

    Raises
    ------
    InadmissibleSequenceError
        At the first step whose window is degenerate; ``exc.step`` holds ``k``.
    """
    _check_hold(hold)
    u = np.asarray(inputs, dtype=float).ravel()
    if u.size != len(sched):
        raise InvalidScheduleError(
            f"{u.size} inputs for a schedule of {len(sched)} instants")
    ev = _Evaluator(tf, hold, thresholds)
    n = ev.n
    t = sched.instants
    warm = min(len(sched), n + (hold == "zoh"))
    y = np.zeros(u.size)
    for k in range(warm):
        y[k] = ev.convolve(t, u, k)
    for k in range(warm, u.size):
        c = ev.coefficients(sched, k)
        y[k] = c.f @ y[k - n:k][::-1] + c.g @ u[k - c.g.size + 1:k + 1][::-1]
    return y
