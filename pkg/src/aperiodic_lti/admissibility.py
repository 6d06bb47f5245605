"""Admissibility of sampling windows.

A window of periods is admissible when the vectors ``G_0 .. G_{n-1}`` are
linearly independent, equivalently when the fundamental-solution determinant
``Delta = det[phi_l(alpha_j)]`` is nonzero. Besides the generic determinant
test this module recognizes the named resonances of low-order systems and
builds sets of safe rotations for a third-order system with one real pole and
one complex pair.

Third-order geometry
--------------------
Write ``mu = a - lambda`` and divide ``Y(alpha) = (e^{a alpha} cos b alpha,
e^{a alpha} sin b alpha, e^{lambda alpha})`` by its last component. The
normalized projections form the logarithmic spiral
``Q(theta) = e^{mu theta / b} e^{i theta}`` with ``theta = b alpha``, and
``Y_2`` lies in the plane of ``Y_0, Y_1`` exactly when ``Q(theta_2)`` lies on
the line ``L`` through ``P0 = Q(0)`` and ``P1 = Q(theta_1)``. ``L`` is seen
from the origin over an open half-turn bounded by the directions ``R1`` (past
``P1``) and ``R0`` (past ``P0``), both parallel to the chord ``P0 P1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from ._thresholds import DEFAULT_THRESHOLDS, Thresholds, hadamard_ratio
from .exceptions import AperiodicLTIError
from .lti_core import Spectrum

__all__ = [
    "Finding",
    "AdmissibilityReport",
    "ArcSet",
    "ReductionPreconditionError",
    "check_generic",
    "check_second_order",
    "check_third_order",
    "allowed_arcs_third_order",
    "third_order_delta",
    "reduction_check_fourth_order",
]

TWO_PI = 2.0 * math.pi

SECOND_ORDER = "second_order_pi_multiple"
COPLANARITY = "third_order_coplanarity"
EQUAL_REAL_PART = "equal_real_part_2pi"
GENERIC = "generic_degeneracy"


class ReductionPreconditionError(AperiodicLTIError):
    """Some 3-subset of a projected family is dependent; reduce further or use check_generic."""


@dataclass(frozen=True)
class Finding:
    """One named degeneracy condition that triggered."""

    condition: str
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        return {"condition": self.condition, **self.detail}


@dataclass(frozen=True)
class AdmissibilityReport:
    verdict: str
    delta_magnitude: float
    resonances: tuple = ()
    thresholds: Thresholds = DEFAULT_THRESHOLDS

    @property
    def admissible(self) -> bool:
        return self.verdict != "inadmissible"

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "delta_magnitude": self.delta_magnitude,
            "resonances": [r.to_dict() for r in self.resonances],
            "thresholds": self.thresholds.to_dict(),
        }


def _pi_distance(x, period=math.pi):
    """Distance from ``x`` to the nearest integral multiple of ``period``."""
    r = math.fmod(abs(x), period)
    return min(r, period - r)


def _classify(scaled, findings, thresholds):
    if scaled < thresholds.inadmissible or findings:
        return "inadmissible"
    if scaled < thresholds.marginal:
        return "marginal"
    return "admissible"


def check_second_order(b: float, T: float, eps_angle: float = DEFAULT_THRESHOLDS.angle
                       ) -> Optional[Finding]:
    """Flag ``b T`` within ``eps_angle`` of a multiple of pi (the exact n = 2 condition)."""
    if b <= 0 or T <= 0:
        raise ValueError("b and T must be positive")
    if _pi_distance(b * T) < eps_angle:
        return Finding(SECOND_ORDER, {"b": b, "T": T, "angle": b * T,
                                      "multiple_of_pi": round(b * T / math.pi)})
    return None


def check_third_order(lam: float, a: float, b: float, alpha1: float, alpha2: float,
                      eps_angle: float = DEFAULT_THRESHOLDS.angle,
                      eps_real: float = 1e-9) -> list:
    """Named resonances of a real pole ``lam`` plus a complex pair ``a +- jb``.

    (a) coplanarity: ``b alpha_1`` and ``b alpha_2`` are both multiples of pi.
    (b) equal real parts (``|lam - a| < eps_real``) and some
        ``b (alpha_j - alpha_i)`` is a multiple of 2 pi.
    """
    if b <= 0 or not 0 < alpha1 < alpha2:
        raise ValueError("need b > 0 and 0 < alpha1 < alpha2")
    out = []
    if _pi_distance(b * alpha1) < eps_angle and _pi_distance(b * alpha2) < eps_angle:
        out.append(Finding(COPLANARITY, {"angles": [b * alpha1, b * alpha2]}))
    if abs(lam - a) < eps_real * max(1.0, abs(a)):
        alphas = (0.0, alpha1, alpha2)
        for i, j in combinations(range(3), 2):
            ang = b * (alphas[j] - alphas[i])
            if _pi_distance(ang, TWO_PI) < eps_angle:
                out.append(Finding(EQUAL_REAL_PART, {"indices": [i, j], "angle": ang}))
    return out


def _named_findings(sp: Spectrum, alphas, eps_angle):
    findings = []
    pairs = sp.complex_pairs()
    for a, b, _ in pairs:
        if all(_pi_distance(b * al) < eps_angle for al in alphas[1:]):
            name = SECOND_ORDER if sp.n == 2 else COPLANARITY
            findings.append(Finding(name, {"b": b, "angles": [b * al for al in alphas[1:]]}))
    # all modes share one real part and every rotation closes: two columns parallel
    simple = all(m == 1 for _, m in sp.eigenvalues)
    reals = {round(lam.real, 12) for lam, _ in sp.eigenvalues}
    if pairs and simple and len(reals) == 1:
        for i, j in combinations(range(len(alphas)), 2):
            d = alphas[j] - alphas[i]
            if all(_pi_distance(b * d, TWO_PI) < eps_angle for _, b, _ in pairs):
                findings.append(Finding(EQUAL_REAL_PART, {"indices": [i, j]}))
    return findings


def check_generic(sp: Spectrum, periods: Sequence[float],
                  thresholds: Thresholds = DEFAULT_THRESHOLDS) -> AdmissibilityReport:
    """Classify a window of ``n`` periods by the scaled fundamental determinant.

    The verdict is ``inadmissible`` below ``thresholds.inadmissible`` or when a
    named resonance triggers exactly, ``marginal`` below ``thresholds.marginal``
    and ``admissible`` otherwise. Only period differences matter.
    """
    periods = np.asarray(periods, dtype=float).ravel()
    if periods.size != sp.n:
        raise ValueError(f"need {sp.n} periods, got {periods.size}")
    if np.any(periods <= 0):
        raise ValueError("periods must be positive")
    alphas = np.concatenate([[0.0], np.cumsum(periods)])[:-1]
    scaled = hadamard_ratio(sp.real_basis(alphas))
    findings = _named_findings(sp, alphas, thresholds.angle)
    if scaled < thresholds.inadmissible and not findings:
        findings.append(Finding(GENERIC, {"alphas": alphas.tolist()}))
    return AdmissibilityReport(_classify(scaled, findings, thresholds), scaled,
                               tuple(findings), thresholds)


# --------------------------------------------------------------------------
# third-order arcs


def _Y(alpha, lam, a, b):
    e = math.exp(a * alpha)
    return np.array([e * math.cos(b * alpha), e * math.sin(b * alpha), math.exp(lam * alpha)])


def _Y_scaled(alpha, lam, a, b):
    # Y(alpha) / exp(max(a, lam) alpha); the scaled determinant ignores column scale
    top = max(a, lam) * alpha
    e = math.exp(a * alpha - top)
    return np.array([e * math.cos(b * alpha), e * math.sin(b * alpha), math.exp(lam * alpha - top)])


def third_order_delta(lam, a, b, alpha1, alpha2) -> float:
    """Hadamard-scaled ``|det[Y(0), Y(alpha1), Y(alpha2)]|``."""
    M = np.column_stack([_Y_scaled(al, lam, a, b) for al in (0.0, alpha1, alpha2)])
    return hadamard_ratio(M)


def _merge(intervals, touch=0.0):
    out = []
    for lo, hi in sorted(iv for iv in intervals if iv[1] > iv[0]):
        if out and lo <= out[-1][1] + touch:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


def _subtract(intervals, cuts):
    out = list(intervals)
    for clo, chi in cuts:
        nxt = []
        for lo, hi in out:
            if chi <= lo or clo >= hi:
                nxt.append((lo, hi))
                continue
            if clo > lo:
                nxt.append((lo, clo))
            if chi < hi:
                nxt.append((chi, hi))
        out = nxt
    return out


def _ccw(start, end, orient):
    """Arc from ``start`` to ``end`` travelled with orientation ``orient``, as a ccw pair."""
    if orient < 0:
        start, end = end, start
    length = (end - start) % TWO_PI
    lo = start % TWO_PI
    return (lo, lo + length)


def _unroll(pattern, lo, hi):
    """Absolute-angle pieces of a mod-2pi pattern inside ``(lo, hi)``."""
    out = []
    for plo, phi in pattern:
        m = math.floor((lo - phi) / TWO_PI)
        while plo + m * TWO_PI < hi:
            a, b = plo + m * TWO_PI, phi + m * TWO_PI
            if b > lo:
                out.append((max(a, lo), min(b, hi)))
            m += 1
    return _merge(out)


@dataclass(frozen=True)
class ArcSet:
    """Safe rotations ``theta = b alpha_2`` for a fixed real pole, pair and ``alpha_1``.

    Attributes
    ----------
    geometry : str
        ``"contracting"`` (``a < lambda``: finitely many degenerate points),
        ``"expanding"`` (``a > lambda``: infinitely many) or ``"cone"``.
    arcs : list of (float, float)
        Open intervals of absolute angle in ``(theta_1, horizon]`` that are
        free of degenerate points.
    horizon : float
        Beyond this angle ``periodic`` describes the safe set.
    periodic : list of (float, float)
        ccw arcs ``(lo, hi)``, ``0 <= lo < 2 pi``, safe on every rotation past
        ``horizon``.
    zeros : list of float
        Exact degenerate angles found in ``[theta_1, horizon]``.
    trimmed : list of float
        Zeros that fell inside the geometric candidate arcs and were cut out.
    bands : list of (float, float)
        Guard bands around ``zeros`` where the scaled determinant is below the
        guard level; these are excluded from ``arcs``.
    alpha_star : float
        Past this ``alpha_2`` the length of ``Y`` exceeds every point of the
        plane/surface intersection, so any choice is safe; ``inf`` when that
        intersection is unbounded.
    alpha_free : float
        Exact bound past which no degenerate point exists (``inf`` when
        expanding).
    """

    lam: float
    a: float
    b: float
    alpha1: float
    geometry: str
    P0: float
    P1: float
    R0: float
    R1: float
    arcs: list
    horizon: float
    periodic: list
    zeros: list
    trimmed: list
    bands: list
    alpha_star: float
    alpha_free: float

    @property
    def theta1(self):
        return self.b * self.alpha1

    def contains_angle(self, theta: float) -> bool:
        if theta <= self.theta1:
            return False
        if theta <= self.horizon:
            return any(lo < theta < hi for lo, hi in self.arcs)
        phi = theta % TWO_PI
        return any(0.0 < (phi - lo) % TWO_PI < hi - lo or
                   (hi - lo >= TWO_PI and phi != lo) for lo, hi in self.periodic)

    def contains(self, alpha2: float) -> bool:
        return self.contains_angle(self.b * alpha2)

    def arcs_alpha(self):
        return [(lo / self.b, hi / self.b) for lo, hi in self.arcs]

    def to_dict(self) -> dict:
        return {
            "geometry": self.geometry,
            "theta1": self.theta1,
            "P0": self.P0, "P1": self.P1, "R0": self.R0, "R1": self.R1,
            "arcs": [list(a) for a in self.arcs],
            "horizon": self.horizon,
            "periodic": [list(a) for a in self.periodic],
            "zeros": list(self.zeros),
            "trimmed": list(self.trimmed),
            "bands": [list(b) for b in self.bands],
            "alpha_star": self.alpha_star,
            "alpha_free": self.alpha_free,
        }


class _Spiral:
    """Collinearity function of ``Q(theta)`` with the line through P0 and P1."""

    def __init__(self, mu, b, theta1, alpha1):
        self.k = mu / b
        r1 = math.exp(mu * alpha1)
        self.u = np.array([r1 * math.cos(theta1) - 1.0, r1 * math.sin(theta1)])
        self.unorm = float(np.hypot(*self.u))
        self.psi = math.atan2(self.u[1], self.u[0])
        # distance from the origin to L
        self.d = abs(self.u[1]) / self.unorm
        self.beta = math.atan(self.k)

    def F(self, theta):
        return self.unorm * math.exp(self.k * theta) * math.sin(theta - self.psi) + self.u[1]

    def zeros(self, lo, hi):
        """All roots of F in ``[lo, hi]``; F is monotone between its critical points."""
        # F' ~ cos(theta - psi - beta)
        first = self.psi + self.beta + math.pi / 2
        m = math.ceil((lo - first) / math.pi)
        knots = [lo]
        c = first + m * math.pi
        while c < hi:
            if c > lo:
                knots.append(c)
            c += math.pi
        knots.append(hi)
        roots = []
        vals = [self.F(x) for x in knots]
        for (x0, v0), (x1, v1) in zip(zip(knots, vals), zip(knots[1:], vals[1:])):
            if v0 == 0.0:
                roots.append(x0)
            elif v1 != 0.0 and (v0 < 0.0) != (v1 < 0.0):
                roots.append(brentq(self.F, x0, x1, xtol=1e-15, rtol=1e-15))
        if vals[-1] == 0.0:
            roots.append(knots[-1])
        return sorted(set(roots))


def _guard_band(theta_z, b, lam, a, alpha1, level):
    """Half-width around a degenerate angle inside which the scaled |Delta| < level."""
    widths = []
    for side in (-1.0, 1.0):
        delta = 1e-12 * max(1.0, abs(theta_z))
        while delta < 0.5:
            if third_order_delta(lam, a, b, alpha1, (theta_z + side * delta) / b) >= level:
                break
            delta *= 2.0
        widths.append(delta)
    return max(widths)


def _golden_max(fun, lo, hi, tol):
    g = (math.sqrt(5.0) - 1.0) / 2.0
    x1, x2 = hi - g * (hi - lo), lo + g * (hi - lo)
    f1, f2 = fun(x1), fun(x2)
    while hi - lo > tol:
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - g * (hi - lo)
            f1 = fun(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + g * (hi - lo)
            f2 = fun(x2)
    return max(f1, f2)


def _alpha_star(lam, a, b, spiral: _Spiral, tol=1e-6):
    """Smallest alpha past which |Y| exceeds the maximum modulus on Gamma.

    On the plane, direction theta sees L at radius d / cos(theta - theta_F);
    on the surface of revolution the planar radius is then
    rho = rho_L^(a / mu) and |Y| = rho sqrt(1 + rho_L^-2). Works in logs.
    """
    mu = a - lam
    if mu == 0.0 or max(a, lam) <= 0.0:
        return math.inf
    expo = a / mu
    if expo > 0:
        return math.inf  # Gamma reaches infinity along the edges of the half-turn
    log_d = math.log(spiral.d)

    def log_mod(c):
        log_rl = log_d - math.log(c)
        return expo * log_rl + 0.5 * np.logaddexp(0.0, -2.0 * log_rl)

    grid = np.linspace(1e-9, 1.0, 2001)
    vals = np.array([log_mod(c) for c in grid])
    i = int(np.argmax(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    best = max(float(vals[i]), _golden_max(log_mod, lo, hi, tol * 1e-3))

    def excess(al):
        return 0.5 * float(np.logaddexp(2.0 * a * al, 2.0 * lam * al)) - best

    # log|Y| is convex in alpha and tends to +inf; bracket the last crossing
    hi_al = 1.0
    while excess(hi_al) <= 0:
        hi_al *= 2.0
        if hi_al > 1e12:
            return math.inf
    al_grid = np.linspace(0.0, hi_al, 4001)
    ex = np.array([excess(x) for x in al_grid])
    below = np.flatnonzero(ex <= 0)
    if below.size == 0:
        return 0.0
    lo_al = al_grid[below[-1]]
    return brentq(excess, lo_al, al_grid[below[-1] + 1], xtol=tol)


def allowed_arcs_third_order(lam: float, a: float, b: float, alpha1: float,
                             rotations: int = 3,
                             thresholds: Thresholds = DEFAULT_THRESHOLDS,
                             guard_level: float = 1e-10) -> ArcSet:
    """Rotations ``b alpha_2`` that keep ``Y_0, Y_1, Y_2`` independent.

    The candidate arcs follow the normalized-projection geometry:

    * contracting spiral (``a < lambda``): every rotation except the minor arc
      ``P0 P1``, and all rotations past ``alpha_free``;
    * expanding spiral (``a > lambda``): arc ``P0 P1`` and arc ``R1 R0`` on
      every rotation, plus ``P1 R1`` on the first rotation only;
    * equal real parts: everything except the directions of ``P0`` and ``P1``.

    Candidates are then checked against the exact degenerate angles (roots of
    the collinearity function, bracketed on its monotone pieces) up to
    ``horizon``; any root inside a candidate is cut out with a guard band
    where the scaled determinant falls below ``guard_level``.

    Raises
    ------
    ValueError
        If ``b alpha_1`` is within ``thresholds.angle`` of a multiple of pi.
    """
    if b <= 0 or alpha1 <= 0:
        raise ValueError("need b > 0 and alpha1 > 0")
    theta1 = b * alpha1
    if _pi_distance(theta1) < thresholds.angle:
        raise ValueError(f"alpha1 is resonant: b alpha1 = {theta1!r} is a multiple of pi")
    mu = a - lam
    if abs(mu) <= 1e-12 * max(1.0, abs(a), abs(lam)):
        geometry, mu = "cone", 0.0
    else:
        geometry = "expanding" if mu > 0 else "contracting"
    sp = _Spiral(mu, b, theta1, alpha1)
    orient = 1.0 if math.sin(theta1) > 0 else -1.0
    p1 = theta1 % TWO_PI
    r1 = sp.psi % TWO_PI
    r0 = (sp.psi + math.pi) % TWO_PI

    minor = _ccw(0.0, p1, orient)
    p1r1 = _ccw(p1, r1, orient)
    r1r0 = _ccw(r1, r0, orient)

    if geometry == "expanding":
        periodic = [minor, r1r0]
        horizon = theta1 + TWO_PI * max(1, rotations)
        candidates = _unroll(periodic, theta1, horizon)
        candidates = _merge(candidates + _unroll([p1r1], theta1, theta1 + TWO_PI), touch=1e-12)
        alpha_free = math.inf
    elif geometry == "contracting":
        # no root once the spiral radius drops below the distance to L
        theta_free = b * math.log(sp.d) / mu if sp.d < 1.0 else 0.0
        horizon = max(theta1, theta_free) + TWO_PI
        rest = _ccw(p1, 0.0, orient)
        candidates = _unroll([rest], theta1, horizon)
        periodic = [(0.0, TWO_PI)]
        alpha_free = max(theta_free / b, alpha1)
    else:
        horizon = theta1 + TWO_PI * max(1, rotations)
        candidates = [(theta1, horizon)]
        periodic = [(0.0, TWO_PI)]
        alpha_free = math.inf

    # search past the horizon so a root sitting on it is not missed
    zeros = [theta1] + [z for z in sp.zeros(theta1, horizon + 1.0)
                        if z > theta1 * (1 + 1e-14)]
    # the cone has degenerate directions on every rotation
    bands = [(z - w, z + w) for z in zeros
             for w in [_guard_band(z, b, lam, a, alpha1, guard_level)]]
    trimmed = [z for z in zeros[1:] if any(lo < z < hi for lo, hi in candidates)]
    arcs = _merge(_subtract(candidates, bands))
    if geometry == "expanding":
        # late roots converge on the directions of L, which may touch any end
        far = TWO_PI * (math.ceil(horizon / TWO_PI) + 1)

        def guard(phi):
            return _guard_band(far + phi, b, lam, a, alpha1, guard_level)

        periodic = [(lo + guard(lo), hi - guard(hi)) for lo, hi in periodic]
        periodic = [(lo, hi) for lo, hi in periodic if hi > lo]
    if geometry == "cone":
        # degenerate directions recur on every rotation at P0 and P1
        w0 = _guard_band(TWO_PI * (rotations + 1), b, lam, a, alpha1, guard_level)
        w1 = _guard_band(p1 + TWO_PI * (rotations + 1), b, lam, a, alpha1, guard_level)
        periodic = [(w0, p1 - w1), (p1 + w1, TWO_PI - w0)]
        trimmed = []
    return ArcSet(
        lam=lam, a=a, b=b, alpha1=alpha1, geometry=geometry,
        P0=0.0, P1=p1, R0=r0, R1=r1,
        arcs=arcs, horizon=horizon, periodic=periodic,
        zeros=zeros, trimmed=trimmed, bands=bands,
        alpha_star=_alpha_star(lam, a, b, sp), alpha_free=alpha_free,
    )


# --------------------------------------------------------------------------
# fourth order


def reduction_check_fourth_order(lam1: float, lam2: float, a: float, b: float,
                                 alphas: Sequence[float], j: int = 3,
                                 tol: float = 1e-8) -> bool:
    """Independence of ``Y(alpha_0..alpha_3)`` for poles ``lam1, lam2, a +- jb``.

    ``Y`` splits into ``c_1 = (e^{a al} cos, e^{a al} sin, e^{lam1 al})`` and
    ``c_2`` (same with ``lam2``). If every 3-subset of both families is
    independent, ``Y_j`` depends on the other three iff the coefficient vectors
    ``M_1^{-1} c_1(alpha_j)`` and ``M_2^{-1} c_2(alpha_j)`` coincide, where
    ``M_k`` holds the columns ``c_k(alpha_i)``, ``i != j``.

    Returns True when the four vectors are independent.

    Raises
    ------
    ReductionPreconditionError
        If some 3-subset of either family is dependent.
    """
    alphas = [float(x) for x in alphas]
    if len(alphas) != 4:
        raise ValueError("need four alphas")

    def c(al, lam):
        return _Y(al, lam, a, b)

    for lam in (lam1, lam2):
        for sub in combinations(alphas, 3):
            M = np.column_stack([c(al, lam) for al in sub])
            if hadamard_ratio(M) < 1e-10:
                raise ReductionPreconditionError(
                    "a 3-subset of projected vectors is dependent; "
                    "reduce further or use check_generic")
    rest = [al for i, al in enumerate(alphas) if i != j]
    M1 = np.column_stack([c(al, lam1) for al in rest])
    M2 = np.column_stack([c(al, lam2) for al in rest])
    beta1 = np.linalg.solve(M1, c(alphas[j], lam1))
    beta2 = np.linalg.solve(M2, c(alphas[j], lam2))
    scale = max(1.0, float(np.max(np.abs(beta1))), float(np.max(np.abs(beta2))))
    return bool(np.max(np.abs(beta1 - beta2)) > tol * scale)
