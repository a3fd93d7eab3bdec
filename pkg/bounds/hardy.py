"""
Hardy-type inequalities on the cross-section and the pointwise potential inequality.
"""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from geometry.types import CurvatureSummary
from oracles.errors import DomainError
from transverse.errors import InputError, SingularityError
from transverse.quadrature import plain_energy, plain_mass, potential_mass
from transverse.solve import lambda1
from transverse.types import CurvaturePair, SolverOptions, TestFunction, require_half_width

from .errors import QuadratureError
from .types import HardyResidual

logger = logging.getLogger(__name__)

# |I5 - I7| above this (relative) triggers one refinement of the nodes.
QUADRATURE_TOL = 1e-9

# Pointwise potential comparisons are exact up to this absolute slack.
POTENTIAL_SLACK = 1e-12

# Below |u| = FACTORED_CUTOFF * a the factored potential loses its digits to 1/u^2.
FACTORED_CUTOFF = 1e-6


def hardy_weights(u: np.ndarray, a: float) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorised (a^2/(a^2 - u^2)^2, 1/(4 (a - |u|)^2)) for |u| < a."""
    a = require_half_width(a)
    u = np.asarray(u, dtype=float)
    if np.any(np.abs(u) >= a):
        raise DomainError(f"Hardy weights need |u| < a={a}")
    optimal = a * a / (a * a - u * u) ** 2
    classical = 0.25 / (a - np.abs(u)) ** 2
    return optimal, classical


def hardy_weights_at(u: float, a: float) -> Tuple[float, float]:
    """The optimal weight a^2/(a^2 - u^2)^2 and the classical weight 1/(4 (a - |u|)^2) at u."""
    optimal, classical = hardy_weights(u, a)
    return float(optimal), float(classical)


def _potential_terms(nodes: np.ndarray, samples: np.ndarray, pair: CurvaturePair) -> Tuple[float, float]:
    coarse = potential_mass(nodes, samples, pair, 5)
    fine = potential_mass(nodes, samples, pair, 7)
    return fine, abs(fine - coarse)


def _split(nodes: np.ndarray, samples: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Insert element midpoints; the piecewise-linear function is unchanged."""
    mid_nodes = 0.5 * (nodes[:-1] + nodes[1:])
    mid_samples = 0.5 * (samples[:-1] + samples[1:])
    order = np.argsort(np.concatenate([nodes, mid_nodes]), kind="stable")
    return np.concatenate([nodes, mid_nodes])[order], np.concatenate([samples, mid_samples])[order]


def verify_hardy_inequality(
    phi: TestFunction, pair: CurvaturePair, a: float, opts: Optional[SolverOptions] = None
) -> HardyResidual:
    """
    Residual of int |phi'|^2 >= lambda1 int |phi|^2 + int |V| |phi|^2.

    lambda1 comes from the solver, except for the doubly degenerate pair where
    the solver only yields decreasing upper bounds and the limit 0 is used.
    The |V| integral uses 5- and 7-point Gauss rules per element; when they
    disagree the nodes are split once and the integral is retried.
    """
    a = require_half_width(a)
    pair.require_admissible(a)
    nodes = np.asarray(phi.nodes, dtype=float)
    samples = np.asarray(phi.samples, dtype=float)
    if abs(nodes[0] + a) > 1e-12 * a or abs(nodes[-1] - a) > 1e-12 * a:
        raise InputError(f"Test function lives on [{nodes[0]}, {nodes[-1]}], expected [-{a}, {a}]")
    if not np.any(samples != 0.0):
        raise InputError("Test function is identically zero")

    if all(pair.degenerate_endpoints(a)):
        value, value_error, source = 0.0, 0.0, "limit"
    else:
        result = lambda1(pair, a, opts)
        value, value_error, source = result.lambda1, result.error_estimate, "solver"

    energy = plain_energy(nodes, samples)
    mass = plain_mass(nodes, samples)
    potential, quadrature_error = _potential_terms(nodes, samples, pair)
    refined = False
    if quadrature_error > QUADRATURE_TOL * max(1.0, potential):
        logger.warning(
            "Potential integral unsettled for %s (|I5 - I7| = %.3e); splitting %d elements",
            pair, quadrature_error, nodes.size - 1,
        )
        potential, quadrature_error = _potential_terms(*_split(nodes, samples), pair)
        refined = True
        if quadrature_error > QUADRATURE_TOL * max(1.0, potential):
            raise QuadratureError(
                f"Potential integral for {pair} still unsettled after refinement: |I5 - I7| = {quadrature_error:.3e}"
            )

    residual = energy - value * mass - potential
    tolerance = quadrature_error + value_error * mass + 1e-12 * max(1.0, energy)
    logger.debug("Hardy residual for %s: %.6e (tolerance %.3e)", pair, residual, tolerance)
    return HardyResidual(
        pair=pair,
        a=a,
        energy=energy,
        lambda1=value,
        lambda1_source=source,
        mass=mass,
        potential_term=potential,
        residual=residual,
        quadrature_error=quadrature_error,
        tolerance=tolerance,
        refined=refined,
    )


def _potential(u: np.ndarray, k1: float, k2: float, a: float) -> np.ndarray:
    """V(u; k1, k2), in the factored form -(1/(4u^2)) (1/(1 - k1 u) - 1/(1 - k2 u))^2 away from u = 0."""
    f1 = 1.0 - k1 * u
    f2 = 1.0 - k2 * u
    if np.any(f1 == 0.0) or np.any(f2 == 0.0):
        raise SingularityError(f"Potential singular on the grid for curvatures ({k1}, {k2})")
    far = np.abs(u) >= FACTORED_CUTOFF * a
    safe_u = np.where(far, u, 1.0)
    factored = -((1.0 / f1 - 1.0 / f2) ** 2) / (4.0 * safe_u * safe_u)
    direct = -0.25 * (k1 - k2) ** 2 / (f1 * f1 * f2 * f2)
    return np.where(far, factored, direct)


def potential_min_margin(
    k1: float, k2: float, extrema: CurvatureSummary, u_grid: Sequence[float], a: Optional[float] = None
) -> float:
    """min over u of V(u; k1, k2) - min{V(u; k1_plus, k2_minus), V(u; k1_minus, k2_plus)}."""
    u = np.asarray(u_grid, dtype=float)
    a = float(a) if a is not None else float(np.max(np.abs(u))) or 1.0
    slack = 1e-12 * max(1.0, extrema.max_abs)
    if not (extrema.k1_minus - slack <= k1 <= extrema.k1_plus + slack
            and extrema.k2_minus - slack <= k2 <= extrema.k2_plus + slack):
        raise InputError(f"Curvatures ({k1}, {k2}) lie outside the extrema box")
    left = _potential(u, k1, k2, a)
    right = np.minimum(
        _potential(u, extrema.k1_plus, extrema.k2_minus, a),
        _potential(u, extrema.k1_minus, extrema.k2_plus, a),
    )
    return float(np.min(left - right))


def potential_min_inequality_check(
    k1: float, k2: float, extrema: CurvatureSummary, u_grid: Sequence[float], a: Optional[float] = None
) -> bool:
    """True iff V(u; k1, k2) >= min over the two corners at every u, within 1e-12."""
    return potential_min_margin(k1, k2, extrema, u_grid, a) >= -POTENTIAL_SLACK
