"""
Solvers for lambda1(kappa1, kappa2): the weighted finite-element form, the potential
finite-difference form, and the extrapolating dispatcher that cross-validates them.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .coefficients import potential_values
from .eigen import smallest_generalized_eigenpair
from .errors import InconsistencyError, InputError
from .quadrature import element_integrals, weighted_energy, weighted_mass
from .types import (
    CrossCheck,
    CurvaturePair,
    EigenResult,
    GridSpec,
    SolverOptions,
    require_half_width,
)

logger = logging.getLogger(__name__)


def richardson_limit(step_ratio: float, values: Sequence[float], order: int = 2) -> float:
    """
    Richardson table for values computed with steps h, h/r, h/r^2, ...

    Level m removes the h^(order*m) error term.
    """
    n_steps = len(values)
    if n_steps == 1:
        return values[0]

    last_level = list(values)
    this_level: List[float] = []
    for m in range(1, n_steps):
        this_level = []
        mult = step_ratio ** (order * m)
        factor = 1.0 / (mult - 1.0)
        for i in range(n_steps - m):
            low = last_level[i]
            high = last_level[i + 1]
            this_level.append(factor * (mult * high - low))
        last_level = this_level
    return this_level[0]


def _check_grid(pair: CurvaturePair, a: float, grid: GridSpec) -> float:
    a = require_half_width(a)
    if grid.n < 3:
        raise InputError(f"Grid too coarse: n={grid.n}")
    if abs(grid.a - a) > 1e-14 * a:
        raise InputError(f"Grid half-width {grid.a} does not match a={a}")
    pair.require_admissible(a)
    return a


def free_endpoints_for(pair: CurvaturePair, a: float, endpoint_condition: str = "auto") -> Tuple[bool, bool]:
    """
    Endpoints left free (natural condition) by the weighted solver.

    A single endpoint with vanishing weight is freed; with both endpoints
    degenerate the constant has zero energy, so both stay Dirichlet.
    """
    if endpoint_condition == "dirichlet":
        return False, False
    left, right = pair.degenerate_endpoints(a)
    if left and right:
        return False, False
    return left, right


def lambda1_weighted(
    pair: CurvaturePair,
    a: float,
    grid: GridSpec,
    endpoint_condition: str = "auto",
    tol: float = 1e-13,
    max_iter: int = 10_000,
) -> EigenResult:
    """
    Lowest eigenvalue of -(w psi')' = lambda w psi with piecewise-linear elements.

    The quadratic weight is integrated exactly on every element, so the
    discrete value is an upper bound on the continuum one.
    """
    a = _check_grid(pair, a, grid)
    nodes = grid.nodes()
    integrals = element_integrals(nodes, pair)
    stiffness = integrals.weight / integrals.length ** 2

    k_diag = np.zeros(nodes.size)
    k_diag[:-1] += stiffness
    k_diag[1:] += stiffness
    m_diag = np.zeros(nodes.size)
    m_diag[:-1] += integrals.mass_left
    m_diag[1:] += integrals.mass_right

    free = free_endpoints_for(pair, a, endpoint_condition)
    lo = 0 if free[0] else 1
    hi = nodes.size if free[1] else nodes.size - 1

    def quotient(x: np.ndarray) -> float:
        full = np.zeros(nodes.size)
        full[lo:hi] = x
        return weighted_energy(full, integrals) / weighted_mass(full, integrals)

    pair_result = smallest_generalized_eigenpair(
        (k_diag[lo:hi], -stiffness[lo:hi - 1]),
        (m_diag[lo:hi], integrals.mass_cross[lo:hi - 1]),
        tol=tol,
        max_iter=max_iter,
        quotient=quotient,
    )
    logger.debug("weighted-FE %s n=%d: lambda=%.17g (%d iterations)", pair, grid.n, pair_result.value, pair_result.iterations)
    return EigenResult(
        lambda1=pair_result.value,
        eigenvector=pair_result.vector.tolist(),
        nodes=nodes[lo:hi].tolist(),
        method="weighted-FE",
        n=grid.n,
        error_estimate=tol * abs(pair_result.value),
        iterations=pair_result.iterations,
        free_endpoints=free,
        raw_values=[(grid.n, pair_result.value)],
    )


def lambda1_potential(
    pair: CurvaturePair,
    a: float,
    grid: GridSpec,
    tol: float = 1e-13,
    max_iter: int = 10_000,
) -> EigenResult:
    """Lowest eigenvalue of -phi'' + V phi = lambda phi by second-order finite differences."""
    a = _check_grid(pair, a, grid)
    if not pair.inside_potential_box(a):
        raise InputError(
            f"Potential form needs |kappa_i a| <= 0.99, got {pair.scaled(a)}; "
            "use lambda1_weighted near the degenerate endpoints"
        )
    nodes = grid.nodes()
    h = grid.h
    interior = nodes[1:-1]
    potential = potential_values(interior, pair)

    def quotient(x: np.ndarray) -> float:
        full = np.zeros(nodes.size)
        full[1:-1] = x
        differences = np.diff(full)
        energy = np.sum(differences * differences) / h + h * np.sum(potential * x * x)
        return float(energy / (h * np.sum(x * x)))

    pair_result = smallest_generalized_eigenpair(
        (2.0 / h + h * potential, np.full(grid.n - 1, -1.0 / h)),
        (np.full(grid.n, h), np.zeros(grid.n - 1)),
        tol=tol,
        max_iter=max_iter,
        quotient=quotient,
    )
    logger.debug("potential-FD %s n=%d: lambda=%.17g", pair, grid.n, pair_result.value)
    return EigenResult(
        lambda1=pair_result.value,
        eigenvector=pair_result.vector.tolist(),
        nodes=interior.tolist(),
        method="potential-FD",
        n=grid.n,
        error_estimate=tol * abs(pair_result.value),
        iterations=pair_result.iterations,
        raw_values=[(grid.n, pair_result.value)],
    )

# Relative floor on reported error estimates; below it the increments are rounding noise.
ROUNDOFF_FLOOR = 1e-12


def _combine(results: List[EigenResult], extrapolate: bool, log_rate: bool) -> EigenResult:
    """
    Merge solves on successively halved grids into one result carrying the finest eigenvector.

    With extrapolation the value is the Richardson limit of the two finest
    grids and the error estimate is its change against the limit of the two
    coarsest. Raw results estimate their error from the last increment.
    """
    finest = results[-1]
    raw = [value for r in results for value in r.raw_values]
    iterations = sum(r.iterations for r in results)
    values = [r.lambda1 for r in results]
    floor = ROUNDOFF_FLOOR * max(1.0, abs(finest.lambda1))

    if log_rate:
        decreasing = all(b < a for a, b in zip(values, values[1:]))
        return finest.model_copy(update={
            "error_estimate": abs(values[-2] - values[-1]),
            "extrapolated": False,
            "convergence": "raw-decreasing" if decreasing else "raw-nonmonotone",
            "iterations": iterations,
            "raw_values": raw,
        })
    if not extrapolate:
        return finest.model_copy(update={
            "error_estimate": max(abs(values[-2] - values[-1]) / 3.0, floor),
            "iterations": iterations,
            "raw_values": raw,
        })

    limits = [richardson_limit(2.0, values[i:i + 2]) for i in range(len(values) - 1)]
    increment = abs(limits[-1] - limits[-2]) if len(limits) > 1 else abs(limits[-1] - values[-1])
    logger.debug("Richardson limits %s, increment %.3e", limits, increment)
    return finest.model_copy(update={
        "lambda1": limits[-1],
        "error_estimate": max(increment, floor),
        "extrapolated": True,
        "convergence": "richardson",
        "iterations": iterations,
        "raw_values": raw,
    })


def grid_sequence(n: int, a: float, levels: int = 3) -> List[GridSpec]:
    """Grids with n, 2n+1, 4n+3, ... interior nodes; each halves the spacing of the last."""
    grids = [GridSpec(n=n, a=a)]
    while len(grids) < levels:
        grids.append(grids[-1].refined())
    return grids


def lambda1(pair: CurvaturePair, a: float, opts: Optional[SolverOptions] = None) -> EigenResult:
    """
    lambda1(kappa1, kappa2) on (-a, a) with an error estimate.

    Solves the weighted form on n, 2n+1 and 4n+3 interior nodes and
    extrapolates assuming h^2 convergence. Inside the 0.99/a box the
    potential form is solved the same way and the two answers must agree.
    When a Dirichlet condition sits on a degenerate endpoint the values only
    decrease logarithmically and are reported raw.
    """
    opts = opts or SolverOptions()
    a = require_half_width(a)
    pair.require_admissible(a)
    grids = grid_sequence(opts.n, a)

    free = free_endpoints_for(pair, a, opts.endpoint_condition)
    degenerate = pair.degenerate_endpoints(a)
    log_rate = any(d and not f for d, f in zip(degenerate, free))

    weighted = _combine(
        [lambda1_weighted(pair, a, g, opts.endpoint_condition, opts.tol, opts.max_iter) for g in grids],
        opts.extrapolate,
        log_rate,
    )
    if log_rate:
        logger.info(
            "Dirichlet condition on a degenerate endpoint for %s: raw values %s",
            pair, weighted.raw_values,
        )

    if opts.cross_check and pair.inside_potential_box(a):
        potential = _combine(
            [lambda1_potential(pair, a, g, opts.tol, opts.max_iter) for g in grids],
            opts.extrapolate,
            False,
        )
        discrepancy = abs(weighted.lambda1 - potential.lambda1)
        tolerance = 100.0 * (weighted.error_estimate + potential.error_estimate) + 1e-10 * max(1.0, abs(weighted.lambda1))
        check = CrossCheck(
            potential_lambda1=potential.lambda1,
            potential_error=potential.error_estimate,
            discrepancy=discrepancy,
            tolerance=tolerance,
        )
        logger.debug("Cross-check %s: discrepancy=%.3e tolerance=%.3e", pair, discrepancy, tolerance)
        if discrepancy > tolerance:
            raise InconsistencyError(
                f"Weighted ({weighted.lambda1}) and potential ({potential.lambda1}) forms disagree for {pair}",
                diagnostics=check.model_dump(),
            )
        weighted = weighted.model_copy(update={"cross_check": check})
    return weighted
