from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Thresholds:
    """Classification bands for degeneracy checks.

    ``inadmissible`` and ``marginal`` apply to the Hadamard-scaled determinant
    magnitude, which lies in [0, 1]. ``angle`` is the band (radians) used to
    detect exact rotational resonances.
    """

    inadmissible: float = 1e-12
    marginal: float = 1e-8
    angle: float = 1e-9

    def to_dict(self):
        return {"inadmissible": self.inadmissible, "marginal": self.marginal,
                "angle": self.angle}


DEFAULT_THRESHOLDS = Thresholds()


def hadamard_ratio(M, equilibrate_rows=False):
    """``|det M| / prod ||M[:, j]||``, a scale-free degeneracy measure in [0, 1].

    With ``equilibrate_rows`` the rows are first scaled to unit max-norm, which
    leaves solvability unchanged and removes the effect of mixing quantities of
    different magnitude (e.g. a response and its derivatives) in one matrix.
    """
    M = np.asarray(M, dtype=float)
    if equilibrate_rows:
        scale = np.max(np.abs(M), axis=1, keepdims=True)
        scale[scale == 0.0] = 1.0
        M = M / scale
    norms = np.linalg.norm(M, axis=0)
    if np.any(norms == 0.0):
        return 0.0
    # slogdet avoids underflow of the raw determinant
    sign, logdet = np.linalg.slogdet(M / norms)
    if sign == 0.0:
        return 0.0
    return float(min(1.0, np.exp(logdet)))
