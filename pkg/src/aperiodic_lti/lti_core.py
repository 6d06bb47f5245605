"""Continuous-time strictly proper SISO systems.

A system ``G(s) = B(s) / A(s)`` is represented by its monic denominator and a
numerator of lower degree. Its impulse response is evaluated exactly through
the bottom-companion realization ``h(t) = c exp(A t) x0``, where ``x0`` holds
the first ``n`` Markov parameters, or through the modal expansion
``h(t) = sum_i C_i t^p e^{lambda t}``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import matrix_balance

from ._expm import MAX_DIM, expm
from .exceptions import ClusteredRootsWarning, InvalidSystemError, RootFindingError

__all__ = [
    "TransferFunction",
    "CompanionRealization",
    "Spectrum",
    "realize",
    "spectrum",
    "expm",
    "impulse_response",
    "step_realization",
    "markov_parameters",
]

# discarded imaginary parts must stay below this, relative to the magnitude
IMAG_TOL = 1e-10


def _trim_leading_zeros(coeffs):
    coeffs = np.atleast_1d(np.asarray(coeffs, dtype=float))
    nz = np.flatnonzero(coeffs)
    if nz.size == 0:
        return np.zeros(1)
    return coeffs[nz[0]:]


@dataclass(frozen=True)
class TransferFunction:
    """Strictly proper rational transfer function with a monic denominator.

    The constructor accepts any nonzero leading denominator coefficient and
    normalizes both polynomials by it, so ``den[0] == 1`` always holds on the
    stored object.

    Parameters
    ----------
    num : sequence of float
        Numerator coefficients, highest degree first.
    den : sequence of float
        Denominator coefficients, highest degree first.
    """

    num: np.ndarray
    den: np.ndarray

    def __init__(self, num: Sequence[float], den: Sequence[float]):
        den = _trim_leading_zeros(den)
        num = _trim_leading_zeros(num)
        if not (np.all(np.isfinite(den)) and np.all(np.isfinite(num))):
            raise InvalidSystemError("coefficients must be finite reals")
        if den.size < 2 or den[0] == 0.0:
            raise InvalidSystemError("denominator must have degree >= 1")
        if num.size >= den.size:
            raise InvalidSystemError(
                f"transfer function is not strictly proper: deg num = {num.size - 1}, "
                f"deg den = {den.size - 1}"
            )
        lead = den[0]
        num = num / lead
        den = den / lead
        num.setflags(write=False)
        den.setflags(write=False)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @property
    def n(self) -> int:
        return self.den.size - 1

    @property
    def static_gain(self) -> float:
        """``G(0)``; infinite when the system has a pole at the origin."""
        if self.den[-1] == 0.0:
            return math.inf
        return float(self.num[-1] / self.den[-1])

    def padded_num(self) -> np.ndarray:
        """Numerator padded on the left to length ``n``."""
        out = np.zeros(self.n)
        out[self.n - self.num.size:] = self.num
        return out

    def __eq__(self, other):
        if not isinstance(other, TransferFunction):
            return NotImplemented
        return np.array_equal(self.num, other.num) and np.array_equal(self.den, other.den)

    def __hash__(self):
        return hash((self.num.tobytes(), self.den.tobytes()))

    def __repr__(self):
        return f"TransferFunction(num={self.num.tolist()}, den={self.den.tolist()})"

    @classmethod
    def from_poles(cls, poles, num=(1.0,), gain=1.0):
        """Build ``gain * num(s) / prod(s - p)`` from a list of poles."""
        den = np.real_if_close(np.poly(poles), tol=1e6)
        if np.iscomplexobj(den):
            raise InvalidSystemError("poles must come in conjugate pairs")
        return cls(gain * np.asarray(num, dtype=float), den)

    def to_dict(self) -> dict:
        return {"num": [float(v) for v in self.num], "den": [float(v) for v in self.den]}

    @classmethod
    def from_dict(cls, doc: dict) -> "TransferFunction":
        """Parse ``{"num": [...], "den": [...], "gain": K}``; ``gain`` is optional."""
        try:
            num = np.asarray(doc["num"], dtype=float)
            den = np.asarray(doc["den"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidSystemError(f"bad transfer function document: {exc}") from exc
        gain = float(doc.get("gain", 1.0))
        return cls(gain * num, den)


def markov_parameters(tf: TransferFunction) -> np.ndarray:
    """First ``n`` Markov parameters ``h(0), h'(0), ..., h^(n-1)(0)``.

    Uses the long-division recursion ``h_i = b_i - sum_{j<i} a_j h_{i-j}``
    with the numerator padded to length ``n``.
    """
    n = tf.n
    a = tf.den[1:]
    b = tf.padded_num()
    h = np.zeros(n)
    for i in range(n):
        h[i] = b[i] - sum(a[j] * h[i - 1 - j] for j in range(i))
    return h


@dataclass(frozen=True, eq=False)
class CompanionRealization:
    """Triad ``(A, x0, c)`` with ``h(t) = c exp(A t) x0``.

    ``A`` is the bottom-companion matrix of the denominator, ``x0`` the
    Markov-parameter vector and ``c = [1, 0, ..., 0]``.
    """

    A: np.ndarray
    x0: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        # companion matrices are far from normal; a diagonal similarity
        # T^-1 A T shrinks the norm and with it the squaring error of expm
        Ab, T = matrix_balance(self.A, permute=False)
        d = np.diag(T)
        object.__setattr__(self, "_Ab", Ab)
        object.__setattr__(self, "_d", d)
        object.__setattr__(self, "_xb", self.x0 / d)

    @property
    def n(self) -> int:
        return self.x0.size

    def state(self, t: float) -> np.ndarray:
        """``exp(A t) x0``, the vector of ``h`` and its derivatives at ``t``."""
        return self._d * (expm(self._Ab, t) @ self._xb)

    def response(self, t: float) -> float:
        return float(self.c @ self.state(t))


def _companion(den) -> np.ndarray:
    n = den.size - 1
    A = np.zeros((n, n))
    A[np.arange(n - 1), np.arange(1, n)] = 1.0
    A[-1, :] = -den[1:][::-1]
    return A


def realize(tf: TransferFunction) -> CompanionRealization:
    """Bottom-companion realization whose impulse response is that of ``tf``."""
    if not isinstance(tf, TransferFunction):
        raise InvalidSystemError("realize expects a TransferFunction")
    if tf.n > MAX_DIM:
        raise InvalidSystemError(f"order {tf.n} exceeds the supported bound {MAX_DIM}")
    A = _companion(tf.den)
    x0 = markov_parameters(tf)
    c = np.zeros(tf.n)
    c[0] = 1.0
    for arr in (A, x0, c):
        arr.setflags(write=False)
    return CompanionRealization(A, x0, c)


def step_realization(tf: TransferFunction) -> CompanionRealization:
    """Realization of ``G(s)/s``; its causal impulse response is the step response."""
    return realize(TransferFunction(tf.num, np.append(tf.den, 0.0)))


def impulse_response(r: CompanionRealization, t: float, mode: str = "causal") -> float:
    """Evaluate ``h(t)``.

    ``mode="causal"`` returns 0 for ``t < 0`` and the right limit ``h(0+)`` at
    zero. ``mode="extended"`` evaluates ``c exp(A t) x0`` for every real ``t``.
    """
    if mode == "causal":
        if t < 0:
            return 0.0
    elif mode != "extended":
        raise ValueError(f"mode must be 'causal' or 'extended', got {mode!r}")
    return r.response(t)


# --------------------------------------------------------------------------
# spectrum and modal expansion


def _cluster_roots(roots, tol):
    """Single-linkage clustering of roots closer than ``tol * max(1, |r|)``."""
    roots = list(roots)
    groups: list[list[complex]] = []
    for r in roots:
        hits = [g for g in groups
                if any(abs(r - q) <= tol * max(1.0, abs(r), abs(q)) for q in g)]
        merged = [r]
        for g in hits:
            merged.extend(g)
            groups.remove(g)
        groups.append(merged)
    return groups


def _taylor(poly, x, k):
    """First ``k`` Taylor coefficients of ``poly`` (highest first) about ``x``."""
    coeffs = []
    p = np.asarray(poly, dtype=complex)
    for _ in range(k):
        if p.size == 0:
            coeffs.append(0.0)
            continue
        q, r = np.polydiv(p, np.array([1.0, -x]))
        coeffs.append(r[-1] if r.size else 0.0)
        p = q if p.size > 1 else np.zeros(0)
    return np.array(coeffs, dtype=complex)


def _series_div(num, den, k):
    out = np.zeros(k, dtype=complex)
    for i in range(k):
        acc = num[i] - sum(out[j] * den[i - j] for j in range(i))
        out[i] = acc / den[0]
    return out


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Distinct poles with multiplicities and the modal coefficients of ``h``.

    ``basis[i] = (lambda, p)`` stands for the fundamental solution
    ``t^p exp(lambda t)``, and ``h(t) = sum_i modal_coeffs[i] * basis_i(t)``.

    Attributes
    ----------
    eigenvalues : list of (complex, int)
        Distinct eigenvalues and their multiplicities, sorted by real then
        imaginary part. Non-real values appear in conjugate pairs.
    modal_coeffs : ndarray of complex
        Coefficients aligned with ``basis``.
    basis : list of (complex, int)
        Fundamental system of solutions.
    merged : bool
        True if nearby roots were merged into a multiple root.
    """

    eigenvalues: list
    modal_coeffs: np.ndarray
    basis: list
    merged: bool = False

    @property
    def n(self) -> int:
        return sum(m for _, m in self.eigenvalues)

    def poles(self) -> np.ndarray:
        """Eigenvalues repeated by multiplicity."""
        return np.array([lam for lam, m in self.eigenvalues for _ in range(m)])

    def complex_pairs(self):
        """``(a, b, multiplicity)`` for each pair ``a +- jb`` with ``b > 0``."""
        return [(lam.real, lam.imag, m) for lam, m in self.eigenvalues if lam.imag > 0]

    def real_eigenvalues(self):
        return [(lam.real, m) for lam, m in self.eigenvalues if lam.imag == 0]

    def evaluate(self, t, causal=False):
        """Impulse response from the modal expansion; ``t`` may be an array."""
        t = np.asarray(t, dtype=float)
        acc = np.zeros(t.shape, dtype=complex)
        for coef, (lam, p) in zip(self.modal_coeffs, self.basis):
            acc += coef * t ** p * np.exp(lam * t)
        scale = np.maximum(1.0, np.abs(acc))
        if np.any(np.abs(acc.imag) > 1e3 * IMAG_TOL * scale):
            raise ArithmeticError("modal expansion lost conjugate symmetry")
        out = acc.real
        if causal:
            out = np.where(t < 0, 0.0, out)
        return out if out.ndim else float(out)

    def real_basis(self, alphas) -> np.ndarray:
        """Real fundamental matrix ``Phi[l, j] = phi_l(alpha_j)``.

        Each complex pair contributes the rows ``t^p e^{at} cos(bt)`` and
        ``t^p e^{at} sin(bt)``; real eigenvalues contribute ``t^p e^{lambda t}``.
        """
        alphas = np.asarray(alphas, dtype=float)
        rows = []
        for lam, m in self.eigenvalues:
            if lam.imag < 0:
                continue
            for p in range(m):
                tp = alphas ** p
                if lam.imag == 0:
                    rows.append(tp * np.exp(lam.real * alphas))
                else:
                    env = tp * np.exp(lam.real * alphas)
                    rows.append(env * np.cos(lam.imag * alphas))
                    rows.append(env * np.sin(lam.imag * alphas))
        return np.array(rows)


def spectrum(tf: TransferFunction, cluster_tol: float = 1e-8) -> Spectrum:
    """Poles of ``tf`` with multiplicities and confluent partial fractions.

    Roots closer than ``cluster_tol`` (relative) are merged into one multiple
    root and a :class:`ClusteredRootsWarning` is issued.

    Raises
    ------
    RootFindingError
        If the eigenvalue iteration behind ``numpy.roots`` does not converge.
    """
    try:
        raw = np.roots(tf.den)
    except np.linalg.LinAlgError as exc:
        raise RootFindingError(f"root finder did not converge: {exc}") from exc
    if raw.size != tf.n or not np.all(np.isfinite(raw)):
        raise RootFindingError("root finder returned an incomplete root set")

    groups = _cluster_roots(raw, cluster_tol)
    # exactly repeated roots are not a numerical merge
    merged = any(len(set(g)) > 1 for g in groups)
    if merged:
        warnings.warn(
            f"merged {sum(len(g) for g in groups if len(set(g)) > 1)} nearby roots "
            "into multiple roots", ClusteredRootsWarning, stacklevel=2)

    distinct = []
    for g in groups:
        centre = complex(np.mean(g))
        if abs(centre.imag) <= cluster_tol * max(1.0, abs(centre)):
            centre = complex(centre.real, 0.0)
        distinct.append([centre, len(g)])
    # conjugate symmetry: keep upper-half representatives, mirror them
    upper = [(lam, m) for lam, m in distinct if lam.imag > 0]
    reals = [(lam, m) for lam, m in distinct if lam.imag == 0]
    lower = [(lam, m) for lam, m in distinct if lam.imag < 0]
    if sum(m for _, m in upper) != sum(m for _, m in lower):
        raise RootFindingError("complex roots are not conjugate-paired")
    eig = reals + upper + [(lam.conjugate(), m) for lam, m in upper]
    eig.sort(key=lambda e: (e[0].real, e[0].imag))

    # residues r_{lam,q} of 1/(s-lam)^q, from the Taylor series of
    # B(s) / prod_{mu != lam} (s - mu)^{m_mu} about lam
    basis, coeffs = [], []
    for lam, m in eig:
        other = np.array([1.0 + 0j])
        for mu, mm in eig:
            if mu != lam:
                other = np.polymul(other, np.poly([mu] * mm))
        num_t = _taylor(tf.num, lam, m)
        den_t = _taylor(other, lam, m)
        q = _series_div(num_t, den_t, m)
        # q[k] = r_{lam, m-k}; t^p e^{lam t} carries r_{lam, p+1} / p!
        for p in range(m):
            coeffs.append(q[m - 1 - p] / math.factorial(p))
            basis.append((lam, p))
    return Spectrum(
        eigenvalues=[(lam, m) for lam, m in eig],
        modal_coeffs=np.array(coeffs, dtype=complex),
        basis=basis,
        merged=merged,
    )
