"""
The curvature-independent floor for layers of non-negative Gauss curvature.
"""

from oracles.bessel import bessel_j0_first_zero
from transverse.types import require_half_width

__all__ = ["bessel_j0_first_zero", "faber_krahn_floor"]


def faber_krahn_floor(a: float) -> float:
    """j01^2 / (2a)^2, the lowest Dirichlet eigenvalue of the disk of radius 2a."""
    a = require_half_width(a)
    return (bessel_j0_first_zero() / (2.0 * a)) ** 2
