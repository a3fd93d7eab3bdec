"""
Closed-form and special-function references: the lowest Dirichlet eigenvalue of
annuli and disks, and the Rayleigh quotient of the logarithmic cut-off profile.
"""

import logging

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

from transverse.errors import InputError
from transverse.types import require_half_width

from .bessel import bessel_j0, bessel_j0_first_zero, bessel_y0
from .errors import DomainError, OracleError
from .types import AnnulusSpec

logger = logging.getLogger(__name__)

# The first root is searched in [SCAN_START, SCAN_STOP] * pi / width.
SCAN_START = 0.1
SCAN_STOP = 10.0
SCAN_STEP = 0.01


def annulus_cross_product(k, spec: AnnulusSpec):
    """J0(k r_in) Y0(k r_out) - J0(k r_out) Y0(k r_in); zero at the radial Dirichlet eigenvalues k^2."""
    k = np.asarray(k, dtype=float)
    return (
        bessel_j0(k * spec.r_in) * bessel_y0(k * spec.r_out)
        - bessel_j0(k * spec.r_out) * bessel_y0(k * spec.r_in)
    )


def annulus_lowest_eigenvalue(spec: AnnulusSpec) -> float:
    """
    Smallest k^2 where the radial cross product vanishes.

    The ground state of an annulus is radially symmetric, so only the order
    zero equation is solved. The first sign change on a uniform k-grid
    brackets the root, which brentq then refines to 1e-13 relative.
    """
    k0 = np.pi / spec.width
    ks = k0 * np.arange(SCAN_START, SCAN_STOP + SCAN_STEP / 2, SCAN_STEP)
    values = annulus_cross_product(ks, spec)
    exact = np.flatnonzero(values == 0.0)
    changes = np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)
    if exact.size and (not changes.size or exact[0] <= changes[0]):
        return float(ks[exact[0]] ** 2)
    if not changes.size:
        raise OracleError(
            f"No sign change of the cross product in [{SCAN_START}, {SCAN_STOP}] x pi/width for {spec}"
        )
    i = changes[0]
    k = brentq(lambda x: float(annulus_cross_product(x, spec)), ks[i], ks[i + 1], xtol=1e-15 * k0, rtol=1e-13)
    logger.debug("Annulus %s: first root k=%.16g bracketed in [%g, %g]", spec, k, ks[i], ks[i + 1])
    return float(k * k)


def disk_lowest_eigenvalue(radius: float) -> float:
    """(j01 / radius)^2"""
    if not np.isfinite(radius) or radius <= 0:
        raise DomainError(f"Disk radius must be positive, got {radius}")
    return (bessel_j0_first_zero() / radius) ** 2


def annulus_radial_fd_eigenvalue(spec: AnnulusSpec, n: int) -> float:
    """
    Lowest eigenvalue of -(r u')'/r = lambda u on (r_in, r_out) by second-order finite differences.

    The scheme is symmetrized with the diagonal r_i and solved densely with
    eigh_tridiagonal, independently of the Bessel root.
    """
    if n < 3:
        raise DomainError(f"Radial grid needs n >= 3 interior nodes, got {n}")
    h = spec.width / (n + 1)
    r = spec.r_in + h * np.arange(1, n + 1)
    r_mid = r[:-1] + 0.5 * h
    diagonal = np.full(n, 2.0 / (h * h))
    off = -r_mid / (h * h * np.sqrt(r[:-1] * r[1:]))
    values = eigh_tridiagonal(diagonal, off, eigvals_only=True, select='i', select_range=(0, 0))
    return float(values[0])


def psi_epsilon_quotient_closed_form(eps: float, a: float) -> float:
    """
    Exact weighted Rayleigh quotient bound of the cut-off profile.

    With L = ln(1/eps) and the weight 1 - u/a on (0, a):
    numerator 1/(a L) and denominator
    (a^2 - eps^2)/(2a) + [eps^2 (L^2/2 - L/2 + 1/4) - eps^4/4] / (a L^2).
    The value 2 * numerator / denominator bounds the quotient for the
    doubly degenerate pair and behaves like 4/(a^2 L).
    """
    a = require_half_width(a)
    if not (0.0 < eps < min(1.0, a)):
        raise InputError(f"eps must lie in (0, min(1, a)) = (0, {min(1.0, a)}), got {eps}")
    L = np.log(1.0 / eps)
    numerator = 1.0 / (a * L)
    layer = (eps ** 2 * (L * L / 2.0 - L / 2.0 + 0.25) - eps ** 4 / 4.0) / (a * L * L)
    denominator = (a * a - eps * eps) / (2.0 * a) + layer
    return float(2.0 * numerator / denominator)
