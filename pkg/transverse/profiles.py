"""
Test functions for the weighted Rayleigh quotient: evaluation of the quotient and the
logarithmic cut-off profile that drives lambda1(-1/a, 1/a) to zero.
"""

import logging

import numpy as np

from .errors import InputError
from .quadrature import element_integrals, weighted_energy, weighted_mass
from .types import CurvaturePair, GridSpec, TestFunction, require_half_width

logger = logging.getLogger(__name__)

# Log-spaced nodes per decade of distance to the boundary inside the cut-off layer.
NODES_PER_DECADE = 32


def rayleigh_quotient_weighted(psi: TestFunction, pair: CurvaturePair, a: float) -> float:
    """
    (int w |psi'|^2) / (int w |psi|^2) for the piecewise-linear interpolant of psi.

    The weight is integrated exactly on every element of psi's own nodes.
    """
    a = require_half_width(a)
    pair.require_admissible(a)
    nodes = np.asarray(psi.nodes, dtype=float)
    if abs(nodes[0] + a) > 1e-12 * a or abs(nodes[-1] - a) > 1e-12 * a:
        raise InputError(f"Test function lives on [{nodes[0]}, {nodes[-1]}], expected [-{a}, {a}]")
    values = np.asarray(psi.samples, dtype=float)
    integrals = element_integrals(nodes, pair)
    denominator = weighted_mass(values, integrals)
    if denominator <= 0.0:
        raise InputError("Test function has zero weighted norm")
    return weighted_energy(values, integrals) / denominator


def _require_eps(eps: float, a: float) -> None:
    if not (0.0 < eps < min(1.0, a)):
        raise InputError(f"eps must lie in (0, min(1, a)) = (0, {min(1.0, a)}), got {eps}")


def psi_epsilon_values(u: np.ndarray, eps: float, a: float) -> np.ndarray:
    """
    The cut-off profile at u.

    1 for |u| <= a - eps, -log((a - |u|)/eps^2)/log(eps) between the break
    radii a - eps and a - eps^2, and 0 beyond.
    """
    a = require_half_width(a)
    _require_eps(eps, a)
    distance = np.clip(a - np.abs(np.asarray(u, dtype=float)), eps * eps, eps)
    return -np.log(distance / (eps * eps)) / np.log(eps)


def composite_nodes(eps: float, a: float, grid: GridSpec, per_decade: int = NODES_PER_DECADE) -> np.ndarray:
    """
    Uniform grid nodes plus the break radii plus log-spaced nodes inside each cut-off layer.

    Nodes closer than 1e-14 a to a predecessor are dropped; the endpoints stay exactly -a and a.
    """
    decades = np.log10(1.0 / eps)
    count = int(np.ceil(per_decade * decades)) + 1
    distances = np.logspace(2.0 * np.log10(eps), np.log10(eps), count)
    distances[0], distances[-1] = eps * eps, eps
    layer = a - distances
    nodes = np.unique(np.concatenate([grid.nodes(), layer, -layer, [-a, a]]))
    keep = np.concatenate(([True], np.diff(nodes) > 1e-14 * a))
    nodes = nodes[keep]
    nodes = nodes[(nodes > -a) & (nodes < a)]
    return np.concatenate(([-a], nodes, [a]))


def psi_epsilon_profile(eps: float, a: float, grid: GridSpec, per_decade: int = NODES_PER_DECADE) -> TestFunction:
    """Samples of the cut-off profile on the composite grid built from `grid`."""
    a = require_half_width(a)
    _require_eps(eps, a)
    if abs(grid.a - a) > 1e-14 * a:
        raise InputError(f"Grid half-width {grid.a} does not match a={a}")
    nodes = composite_nodes(eps, a, grid, per_decade)
    samples = psi_epsilon_values(nodes, eps, a)
    samples[0] = 0.0
    samples[-1] = 0.0
    logger.debug("psi_eps profile eps=%g on %d nodes", eps, nodes.size)
    return TestFunction(nodes=nodes.tolist(), samples=samples.tolist())
