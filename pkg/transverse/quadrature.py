"""
Element-wise Gauss-Legendre integrals for piecewise-linear functions against the quadratic weight.
"""

from typing import NamedTuple, Tuple

import numpy as np

from .coefficients import potential_values, weight_values
from .types import CurvaturePair

# 3 points integrate the degree-4 mass integrand exactly.
GAUSS_3 = np.polynomial.legendre.leggauss(3)


class ElementIntegrals(NamedTuple):
    length: np.ndarray
    weight: np.ndarray  # integral of w over the element
    mass_left: np.ndarray  # integral of w N0^2
    mass_cross: np.ndarray  # integral of w N0 N1
    mass_right: np.ndarray  # integral of w N1^2


def element_points(nodes: np.ndarray, rule: Tuple[np.ndarray, np.ndarray]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Quadrature points, scaled weights and reference abscissae for every element."""
    xi, wq = rule
    left, right = nodes[:-1], nodes[1:]
    half = 0.5 * (right - left)
    mid = 0.5 * (right + left)
    points = mid[:, None] + half[:, None] * xi[None, :]
    weights = half[:, None] * wq[None, :]
    return points, weights, xi


def element_integrals(nodes: np.ndarray, pair: CurvaturePair) -> ElementIntegrals:
    nodes = np.asarray(nodes, dtype=float)
    points, weights, xi = element_points(nodes, GAUSS_3)
    w = weight_values(points, pair) * weights
    n0 = 0.5 * (1.0 - xi)
    n1 = 0.5 * (1.0 + xi)
    return ElementIntegrals(
        length=np.diff(nodes),
        weight=w.sum(axis=1),
        mass_left=(w * n0 * n0).sum(axis=1),
        mass_cross=(w * n0 * n1).sum(axis=1),
        mass_right=(w * n1 * n1).sum(axis=1),
    )


def weighted_energy(values: np.ndarray, integrals: ElementIntegrals) -> float:
    """Integral of w |psi'|^2 for nodal values on the full node set."""
    slopes = np.diff(values) / integrals.length
    return float(np.sum(integrals.weight * slopes * slopes))


def weighted_mass(values: np.ndarray, integrals: ElementIntegrals) -> float:
    """Integral of w |psi|^2 for nodal values on the full node set."""
    left, right = values[:-1], values[1:]
    return float(np.sum(
        integrals.mass_left * left * left
        + 2.0 * integrals.mass_cross * left * right
        + integrals.mass_right * right * right
    ))


def plain_energy(nodes: np.ndarray, values: np.ndarray) -> float:
    """Integral of |phi'|^2 for the piecewise-linear interpolant."""
    slopes = np.diff(values) / np.diff(nodes)
    return float(np.sum(slopes * slopes * np.diff(nodes)))


def plain_mass(nodes: np.ndarray, values: np.ndarray) -> float:
    """Integral of |phi|^2 for the piecewise-linear interpolant (exact)."""
    left, right = values[:-1], values[1:]
    return float(np.sum(np.diff(nodes) * (left * left + left * right + right * right) / 3.0))


def potential_mass(nodes: np.ndarray, values: np.ndarray, pair: CurvaturePair, points: int) -> float:
    """Integral of |V| |phi|^2 with an n-point Gauss rule per element."""
    nodes = np.asarray(nodes, dtype=float)
    values = np.asarray(values, dtype=float)
    u, weights, xi = element_points(nodes, np.polynomial.legendre.leggauss(points))
    n0 = 0.5 * (1.0 - xi)
    n1 = 0.5 * (1.0 + xi)
    phi = values[:-1, None] * n0[None, :] + values[1:, None] * n1[None, :]
    return float(np.sum(np.abs(potential_values(u, pair)) * phi * phi * weights))
