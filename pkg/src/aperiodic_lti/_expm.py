"""Matrix exponential by scaling and squaring with diagonal Pade approximants.

Follows Higham (2005), "The scaling and squaring method for the matrix
exponential revisited": pick the lowest Pade degree m in {3, 5, 7, 9, 13}
whose backward-error bound covers ||M||_1, otherwise scale by 2^-s and use
degree 13, then square s times.
"""

import numpy as np

from .exceptions import ExpmOverflowError

MAX_DIM = 12

_THETA = {
    3: 1.495585217958292e-2,
    5: 2.539398330063230e-1,
    7: 9.504178996162932e-1,
    9: 2.097847961257068e0,
    13: 5.371920351148152e0,
}

_PADE = {
    3: (120.0, 60.0, 12.0, 1.0),
    5: (30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0),
    7: (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0),
    9: (17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
        2162160.0, 110880.0, 3960.0, 90.0, 1.0),
    13: (64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
         1187353796428800.0, 129060195264000.0, 10559470521600.0,
         670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
         960960.0, 16380.0, 182.0, 1.0),
}

# ln(max double); beyond this even a 1x1 block overflows
_LOG_MAX = 709.0


def _pade_low(A, m):
    c = _PADE[m]
    ident = np.eye(A.shape[0])
    A2 = A @ A
    powers = [ident, A2]
    for _ in range((m - 1) // 2 - 1):
        powers.append(powers[-1] @ A2)
    U = sum(c[2 * j + 1] * powers[j] for j in range(len(powers)))
    U = A @ U
    V = sum(c[2 * j] * powers[j] for j in range(len(powers)))
    return U, V


def _pade13(A):
    c = _PADE[13]
    ident = np.eye(A.shape[0])
    A2 = A @ A
    A4 = A2 @ A2
    A6 = A4 @ A2
    U = A @ (A6 @ (c[13] * A6 + c[11] * A4 + c[9] * A2)
             + c[7] * A6 + c[5] * A4 + c[3] * A2 + c[1] * ident)
    V = (A6 @ (c[12] * A6 + c[10] * A4 + c[8] * A2)
         + c[6] * A6 + c[4] * A4 + c[2] * A2 + c[0] * ident)
    return U, V


def expm(M, t=1.0, max_dim=MAX_DIM):
    """Return ``exp(M * t)`` for a small real square matrix.

    Parameters
    ----------
    M : array_like, shape (n, n)
        Finite real matrix.
    t : float
        Time argument; negative values are allowed.
    max_dim : int
        Largest accepted dimension.

    Raises
    ------
    ExpmOverflowError
        If the result cannot be represented in double precision.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expm expects a square matrix, got shape {M.shape}")
    n = M.shape[0]
    if n > max_dim:
        raise ValueError(f"matrix dimension {n} exceeds the bound {max_dim}")
    if not np.all(np.isfinite(M)) or not np.isfinite(t):
        raise ValueError("expm expects finite input")
    if n == 0:
        return np.zeros((0, 0))
    A = M * float(t)
    if n == 1:
        x = A[0, 0]
        if x > _LOG_MAX:
            raise ExpmOverflowError(f"exp({x:.6g}) overflows")
        return np.array([[np.exp(x)]])

    norm = np.linalg.norm(A, 1)

    s = 0
    for m in (3, 5, 7, 9):
        if norm <= _THETA[m]:
            U, V = _pade_low(A, m)
            break
    else:
        if norm > _THETA[13]:
            s = max(0, int(np.ceil(np.log2(norm / _THETA[13]))))
            A = A / 2.0 ** s
        U, V = _pade13(A)

    R = np.linalg.solve(V - U, V + U)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(s):
            R = R @ R
    if not np.all(np.isfinite(R)):
        raise ExpmOverflowError(f"exp(M t) overflows (||M t||_1 = {norm:.6g})")
    return R
