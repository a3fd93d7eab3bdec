"""
Smallest eigenpair of a symmetric tridiagonal pencil K x = lambda M x by shifted inverse iteration.
"""

import logging
from typing import Callable, NamedTuple, Optional, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cholesky_banded, solve_banded

from .errors import InputError, NumericalError

logger = logging.getLogger(__name__)

# Changes that stop shrinking below this relative size are rounding noise.
STAGNATION = np.sqrt(np.finfo(float).eps)

# (diagonal, off-diagonal) of a symmetric tridiagonal matrix
Tridiagonal = Tuple[np.ndarray, np.ndarray]


class Eigenpair(NamedTuple):
    value: float
    vector: np.ndarray
    iterations: int


def tridiagonal_matvec(matrix: Tridiagonal, x: np.ndarray) -> np.ndarray:
    diag, off = matrix
    y = diag * x
    y[:-1] += off * x[1:]
    y[1:] += off * x[:-1]
    return y


def _general_band(diag: np.ndarray, off: np.ndarray) -> np.ndarray:
    band = np.zeros((3, diag.size))
    band[0, 1:] = off
    band[1] = diag
    band[2, :-1] = off
    return band


def _check_pencil(K: Tridiagonal, M: Tridiagonal) -> None:
    size = K[0].size
    if M[0].size != size or K[1].size != size - 1 or M[1].size != size - 1:
        raise InputError(
            f"Pencil dimensions do not match: K {K[0].size}/{K[1].size}, M {M[0].size}/{M[1].size}"
        )
    if size < 1:
        raise InputError("Empty pencil")
    upper = np.zeros((2, size))
    upper[0, 1:] = M[1]
    upper[1] = M[0]
    try:
        cholesky_banded(upper, lower=False)
    except LinAlgError as e:
        raise InputError(f"Mass matrix is not positive definite: {e}") from e


def smallest_generalized_eigenpair(
    K: Tridiagonal,
    M: Tridiagonal,
    tol: float = 1e-13,
    max_iter: int = 10_000,
    quotient: Optional[Callable[[np.ndarray], float]] = None,
) -> Eigenpair:
    """
    Lowest eigenpair of K x = lambda M x.

    Starts from the all-ones vector with shift 0 and moves the shift to the
    current Rayleigh quotient after every step. `quotient` may replace the
    plain x'Kx / x'Mx evaluation with a better conditioned energy form.
    The returned vector has x'Mx = 1 and a positive first nonzero entry.
    """
    K = (np.asarray(K[0], dtype=float), np.asarray(K[1], dtype=float))
    M = (np.asarray(M[0], dtype=float), np.asarray(M[1], dtype=float))
    _check_pencil(K, M)

    if quotient is None:
        def quotient(v: np.ndarray) -> float:
            return float(v @ tridiagonal_matvec(K, v)) / float(v @ tridiagonal_matvec(M, v))

    size = K[0].size
    # the quotient itself is only accurate to a few ulps per sqrt(size)
    stop = max(tol, 16.0 * np.finfo(float).eps * np.sqrt(size))
    x = np.ones(size)
    x /= np.sqrt(x @ tridiagonal_matvec(M, x))
    shift = 0.0
    previous = None
    last_change = None
    for iteration in range(1, max_iter + 1):
        shifted = _general_band(K[0] - shift * M[0], K[1] - shift * M[1])
        try:
            y = solve_banded((1, 1), shifted, tridiagonal_matvec(M, x))
        except LinAlgError:
            # shift landed exactly on an eigenvalue: x already spans its eigenspace
            logger.debug("Exact singular shift %.17g at iteration %d", shift, iteration)
            return _finish(x, quotient(x), iteration)
        if not np.all(np.isfinite(y)):
            return _finish(x, quotient(x), iteration)
        x = y / np.sqrt(y @ tridiagonal_matvec(M, y))
        value = quotient(x)
        logger.debug("Inverse iteration %d: shift=%.17g value=%.17g", iteration, shift, value)
        if previous is not None:
            change = abs(value - previous)
            scale = max(abs(value), np.finfo(float).tiny)
            if change <= stop * scale:
                return _finish(x, value, iteration)
            if last_change is not None and last_change <= change <= STAGNATION * scale:
                logger.debug("Quotient stagnated at %.3e relative change", change / scale)
                return _finish(x, value, iteration)
            last_change = change
        previous = value
        shift = value

    raise NumericalError(
        f"Inverse iteration did not converge in {max_iter} iterations",
        diagnostics={"last_value": previous, "shift": shift, "size": size},
    )


def _finish(x: np.ndarray, value: float, iterations: int) -> Eigenpair:
    nonzero = np.flatnonzero(x)
    if nonzero.size and x[nonzero[0]] < 0:
        x = -x
    return Eigenpair(value=value, vector=x, iterations=iterations)
