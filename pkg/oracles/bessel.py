"""
Bessel functions of order zero for the annulus and disk references.
"""

from functools import lru_cache

import numpy as np
from scipy import special
from scipy.optimize import brentq

from .errors import DomainError

# J0 changes sign exactly once on this bracket.
J0_BRACKET = (2.0, 3.0)


def bessel_j0(x):
    """J0(x); accepts scalars or arrays."""
    return special.j0(x)


def bessel_y0(x):
    """Y0(x) for x > 0; accepts scalars or arrays."""
    if np.any(np.asarray(x) <= 0):
        raise DomainError(f"Y0 is only defined for x > 0, got {x}")
    return special.y0(x)


@lru_cache(maxsize=1)
def bessel_j0_first_zero() -> float:
    """First positive zero j01 of J0, about 2.404825557695773."""
    return float(brentq(bessel_j0, *J0_BRACKET, xtol=1e-15))
