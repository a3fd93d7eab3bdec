"""
The layer lower bound from curvature extrema and the checks that support it.
"""

import logging
from typing import Optional

import numpy as np

from geometry.curvature import check_layer_hypothesis, curvature_samples
from geometry.types import CurvatureSummary, LayerHypothesisDiagnostic, ParametricSurface
from transverse.errors import InputError
from transverse.solve import lambda1
from transverse.types import CurvaturePair, SolverOptions, require_half_width

from .errors import HypothesisError
from .floor import faber_krahn_floor
from .types import BoundReport, BranchSolve, PointwiseProfile, ReductionCheck

logger = logging.getLogger(__name__)

# Pointwise profiles solve one problem per distinct curvature pair, so they use a coarser grid.
PROFILE_OPTIONS = SolverOptions(n=400, cross_check=False)

# Corners closer than this (relative to max|k|) are one corner.
CORNER_SLACK = 1e-12


def require_layer_hypothesis(summary: CurvatureSummary, a: float) -> LayerHypothesisDiagnostic:
    diagnostic = check_layer_hypothesis(summary, a)
    if not diagnostic.passed:
        raise HypothesisError(
            f"Layer hypothesis fails for {summary.surface or 'surface'}: "
            f"a * max|k| = {diagnostic.product} is not below 1",
            diagnostic=diagnostic,
        )
    return diagnostic


def _corners_match(pairs, max_abs: float) -> bool:
    slack = CORNER_SLACK * max(1.0, max_abs)
    return abs(pairs[0].kappa1 - pairs[1].kappa1) <= slack and abs(pairs[0].kappa2 - pairs[1].kappa2) <= slack


def theorem1_bound(summary: CurvatureSummary, a: float, opts: Optional[SolverOptions] = None) -> BoundReport:
    """
    min{lambda1(k1_plus, k2_minus), lambda1(k1_minus, k2_plus)}.

    Ties are attributed to the first branch. Corners equal to 1e-12 relative
    and values within the solver error count as ties. The floor j01^2/(2a)^2
    is attached when the sampled curvatures cannot change sign in their
    product, i.e. k1_minus >= 0 or k2_plus <= 0.
    """
    a = require_half_width(a)
    diagnostic = require_layer_hypothesis(summary, a)
    pairs = (
        CurvaturePair(kappa1=summary.k1_plus, kappa2=summary.k2_minus),
        CurvaturePair(kappa1=summary.k1_minus, kappa2=summary.k2_plus),
    )
    same_corner = _corners_match(pairs, summary.max_abs)
    first = lambda1(pairs[0], a, opts)
    second = first if same_corner else lambda1(pairs[1], a, opts)
    values = (first.lambda1, second.lambda1)
    solver_error = max(first.error_estimate, second.error_estimate)
    tied = same_corner or abs(values[0] - values[1]) <= solver_error
    branch = "k1_plus,k2_minus" if tied or values[0] < values[1] else "k1_minus,k2_plus"

    floor = None
    if summary.k1_minus >= 0 or summary.k2_plus <= 0:
        floor = faber_krahn_floor(a)
        if min(values) < floor - 10.0 * solver_error:
            logger.warning("Bound %.12g below the floor %.12g for %s", min(values), floor, summary.surface)

    logger.info("Bound for %s at a=%g: %.12g on branch %s", summary.surface, a, min(values), branch)
    return BoundReport(
        surface=summary.surface,
        a=a,
        lower_bound=min(values),
        branch=branch,
        lambda_branch_values=values,
        branches=[BranchSolve.from_result(p, r) for p, r in zip(pairs, (first, second))],
        floor=floor,
        hypothesis=diagnostic,
        solver_error=solver_error,
    )


def single_curvature_reduction_check(
    k1: float, k2: float, a: float, opts: Optional[SolverOptions] = None
) -> ReductionCheck:
    """lambda1(k1, k2) >= min{lambda1(k1, 0), lambda1(0, k2)}; needs k1 k2 >= 0."""
    a = require_half_width(a)
    if k1 * k2 < 0:
        raise InputError(f"Reduction needs curvatures of equal sign, got ({k1}, {k2})")
    pair = CurvaturePair(kappa1=k1, kappa2=k2)
    full = lambda1(pair, a, opts)
    first = lambda1(CurvaturePair(kappa1=k1, kappa2=0.0), a, opts)
    second = lambda1(CurvaturePair(kappa1=0.0, kappa2=k2), a, opts)
    reduced = min(first.lambda1, second.lambda1)
    tolerance = 10.0 * (full.error_estimate + first.error_estimate + second.error_estimate) \
        + 1e-10 * max(1.0, abs(full.lambda1))
    return ReductionCheck(
        pair=pair,
        a=a,
        value=full.lambda1,
        first_only=first.lambda1,
        second_only=second.lambda1,
        tolerance=tolerance,
        holds=full.lambda1 >= reduced - tolerance,
    )


def pointwise_lambda1_profile(
    surface: ParametricSurface, a: float, resolution: int, opts: Optional[SolverOptions] = None
) -> PointwiseProfile:
    """
    Minimum of lambda1(k1(x), k2(x)) over the sampling grid of the surface.

    Pairs equal to 12 digits are solved once.
    """
    a = require_half_width(a)
    opts = opts or PROFILE_OPTIONS
    samples = curvature_samples(surface, resolution)
    k1 = samples.k1.ravel()
    k2 = samples.k2.ravel()
    if a * max(np.max(np.abs(k1)), np.max(np.abs(k2))) >= 1.0:
        raise HypothesisError(f"Layer hypothesis fails on the samples of {surface.name} for a={a}")

    keys, first_index, inverse = np.unique(
        np.round(np.stack([k1, k2], axis=1), 12), axis=0, return_index=True, return_inverse=True
    )
    results = [
        lambda1(CurvaturePair(kappa1=float(k1[i]), kappa2=float(k2[i])), a, opts) for i in first_index
    ]
    values = np.array([r.lambda1 for r in results])
    best = int(np.argmin(values))
    point = int(np.flatnonzero(np.ravel(inverse) == best)[0])
    logger.debug("Pointwise profile of %s: %d distinct pairs, minimum %.12g", surface.name, len(keys), values[best])
    return PointwiseProfile(
        surface=surface.name,
        a=a,
        minimum=float(values[best]),
        location=(float(samples.p.ravel()[point]), float(samples.q.ravel()[point])),
        pair=CurvaturePair(kappa1=float(k1[point]), kappa2=float(k2[point])),
        distinct_pairs=len(keys),
        error_estimate=max(r.error_estimate for r in results),
    )
