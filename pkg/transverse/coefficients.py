"""
Coefficients of the transverse problem: the volume weight and the effective potential.
"""

import numpy as np

from .errors import InputError, SingularityError
from .types import CurvaturePair, ENDPOINT_SLACK, require_half_width


def weight_values(u: np.ndarray, pair: CurvaturePair) -> np.ndarray:
    """Vectorised weight (1 - kappa1 u)(1 - kappa2 u)."""
    u = np.asarray(u, dtype=float)
    return (1.0 - pair.kappa1 * u) * (1.0 - pair.kappa2 * u)


def weight_at(u: float, pair: CurvaturePair, a: float) -> float:
    """Volume weight at transverse coordinate u in [-a, a]."""
    a = require_half_width(a)
    if abs(u) > a * (1.0 + ENDPOINT_SLACK):
        raise InputError(f"u={u} outside [-a, a] for a={a}")
    return float(weight_values(u, pair))


def potential_values(u: np.ndarray, pair: CurvaturePair) -> np.ndarray:
    """Vectorised V(u; kappa1, kappa2) = -(kappa1 - kappa2)^2 / (4 (1 - kappa1 u)^2 (1 - kappa2 u)^2)."""
    u = np.asarray(u, dtype=float)
    f1 = 1.0 - pair.kappa1 * u
    f2 = 1.0 - pair.kappa2 * u
    if np.any(f1 == 0.0) or np.any(f2 == 0.0):
        raise SingularityError(f"Weight factor vanishes on the evaluation points for {pair}")
    return -0.25 * (pair.kappa1 - pair.kappa2) ** 2 / (f1 * f1 * f2 * f2)


def potential_at(u: float, pair: CurvaturePair, factored: bool = False) -> float:
    """
    Effective potential of the transformed problem -phi'' + V phi.

    With factored=True and u != 0 the equivalent form
    -(1/(4u^2)) [1/(1 - kappa1 u) - 1/(1 - kappa2 u)]^2 is used.
    """
    f1 = 1.0 - pair.kappa1 * u
    f2 = 1.0 - pair.kappa2 * u
    if f1 == 0.0 or f2 == 0.0:
        raise SingularityError(f"Potential singular at u={u} for {pair}")
    if factored and u != 0.0:
        return -((1.0 / f1 - 1.0 / f2) ** 2) / (4.0 * u * u)
    return -0.25 * (pair.kappa1 - pair.kappa2) ** 2 / (f1 * f1 * f2 * f2)
