"""
The verify suite: oracle agreements, Hardy residuals and the pointwise potential inequality.
"""

import logging
from typing import Iterator

import numpy as np
from scipy import special

from bounds.floor import bessel_j0_first_zero, faber_krahn_floor
from bounds.hardy import hardy_weights, potential_min_margin, verify_hardy_inequality
from bounds.theorem import require_layer_hypothesis, single_curvature_reduction_check, theorem1_bound
from geometry.curvature import curvature_summary
from geometry.surfaces import build_surface
from oracles.annulus import annulus_lowest_eigenvalue, disk_lowest_eigenvalue, psi_epsilon_quotient_closed_form
from oracles.bessel import bessel_j0, bessel_y0
from oracles.types import AnnulusSpec
from transverse.errors import NumericalError
from transverse.solve import lambda1
from transverse.types import CurvaturePair, GridSpec, SolverOptions, TestFunction

from .types import CheckResult, RunConfig

logger = logging.getLogger(__name__)

J01_REFERENCE = 2.404825557695773
# Cut-off widths as fractions of min(1, a).
CUTOFF_EPS = (1e-2, 1e-3, 1e-4, 1e-6)
# Coarsest grids of the doubly degenerate pair, each solved on its own.
DEGENERATE_LADDER = (500, 1000, 2000, 4000, 8000)
DISK_GRID = 8000


def _relative(name: str, value: float, reference: float, rel: float) -> CheckResult:
    return CheckResult(
        name=name,
        passed=bool(abs(value - reference) <= rel * abs(reference)),
        value=value,
        reference=reference,
        tolerance=rel,
    )


def _pair(k1: float, k2: float) -> CurvaturePair:
    return CurvaturePair(kappa1=k1, kappa2=k2)


def iter_checks(config: RunConfig) -> Iterator[CheckResult]:
    """
    Yield the checks one by one. Curvatures are scaled by 1/a so every check
    runs at the configured half-width.
    """
    a = config.a
    opts = config.solver_options()
    rng = np.random.default_rng(config.seed)
    flat = np.pi ** 2 / (2 * a) ** 2

    yield _relative("flat-exactness", lambda1(_pair(0.0, 0.0), a, opts).lambda1, flat, 1e-8)
    for kappa in (0.3, 0.7):
        value = lambda1(_pair(kappa / a, kappa / a), a, opts).lambda1
        yield _relative(f"equal-curvature-{kappa}", value, flat, 1e-8)

    for kappa in (0.2, 0.5, 0.8):
        value = lambda1(_pair(kappa / a, 0.0), a, opts).lambda1
        reference = annulus_lowest_eigenvalue(AnnulusSpec.about_circle(kappa / a, a))
        yield _relative(f"annulus-agreement-{kappa}", value, reference, 1e-6)

    disk = lambda1(_pair(1.0 / a, 0.0), a, SolverOptions(n=max(config.grid_n, DISK_GRID)))
    yield _relative("disk-endpoint", disk.lambda1, disk_lowest_eigenvalue(2 * a), 1e-4)

    j01 = bessel_j0_first_zero()
    yield CheckResult(
        name="bessel-first-zero", passed=bool(abs(j01 - J01_REFERENCE) <= 1e-12 and abs(bessel_j0(j01)) <= 1e-13),
        value=j01, reference=J01_REFERENCE, tolerance=1e-12,
    )

    x = np.linspace(0.5, 40.0, 400)
    deviation = float(np.max(np.abs(special.j1(x) * bessel_y0(x) - bessel_j0(x) * special.y1(x) - 2 / (np.pi * x))))
    yield CheckResult(name="wronskian", passed=bool(deviation <= 1e-10), value=deviation, tolerance=1e-10)

    eps_values = [min(1.0, a) * eps for eps in CUTOFF_EPS]
    quotients = [psi_epsilon_quotient_closed_form(eps, a) for eps in eps_values]
    leading = 4.0 / (a * a * np.log(1.0 / eps_values[-1]))
    yield CheckResult(
        name="cutoff-quotient-decreasing",
        passed=bool(all(b < q for q, b in zip(quotients, quotients[1:])) and abs(quotients[-1] - leading) <= 0.2 * leading),
        value=quotients[-1], reference=leading, tolerance=0.2,
        detail=f"eps {eps_values}",
    )

    ladder = [lambda1(_pair(-1.0 / a, 1.0 / a), a, SolverOptions(n=n)) for n in DEGENERATE_LADDER]
    coarse = [result.raw_values[0][1] for result in ladder]
    yield CheckResult(
        name="degenerate-pair-decreasing",
        passed=bool(all(r.convergence == "raw-decreasing" for r in ladder) and all(b < v for v, b in zip(coarse, coarse[1:]))),
        value=ladder[-1].lambda1, detail=f"coarsest-grid values {coarse} for n in {list(DEGENERATE_LADDER)}",
    )

    floor = faber_krahn_floor(a)
    kappas = np.linspace(0.05, 1.0, 20) / a
    values = np.array([lambda1(_pair(0.0, k), a, opts).lambda1 for k in kappas])
    yield CheckResult(
        name="floor-monotonicity",
        passed=bool(np.all(np.diff(values) <= 1e-9 * flat) and np.all(values >= floor - 1e-6 * flat)),
        value=float(values.min()), reference=floor, tolerance=1e-6,
    )

    reduction = single_curvature_reduction_check(0.3 / a, 0.6 / a, a, opts)
    yield CheckResult(
        name="floor-reduction", passed=reduction.holds,
        value=reduction.value, reference=min(reduction.first_only, reduction.second_only),
        tolerance=reduction.tolerance,
    )

    u = rng.uniform(-a, a, 10_000) * (1 - 1e-9)
    optimal, classical = hardy_weights(u, a)
    yield CheckResult(
        name="hardy-dominance", passed=bool(np.all(optimal >= classical)), value=float(np.min(optimal / classical)),
    )

    yield _hardy_residuals(config, rng)
    yield _potential_inequality(config, rng)

    if config.pair is not None:
        try:
            result = lambda1(config.pair, a, opts)
            check = result.cross_check
            yield CheckResult(
                name="pair-cross-check", passed=True, value=result.lambda1,
                reference=check.potential_lambda1 if check else None,
                tolerance=check.tolerance if check else None,
                detail="" if check else "outside the potential box, weighted form only",
            )
        except NumericalError as e:
            yield CheckResult(name="pair-cross-check", passed=False, detail=str(e))

    if config.surface is not None:
        report = theorem1_bound(curvature_summary(config.surface.build(), config.resolution), a, opts)
        if report.floor is not None:
            yield CheckResult(
                name="bound-above-floor", passed=bool(report.lower_bound >= report.floor - 10 * report.solver_error),
                value=report.lower_bound, reference=report.floor,
            )


def _hardy_residuals(config: RunConfig, rng: np.random.Generator) -> CheckResult:
    a = config.a
    pairs = [_pair(0.0, 0.0), _pair(0.5 / a, -0.5 / a), _pair(1.0 / a, -1.0 / a)]
    nodes = GridSpec(n=400, a=a).nodes()
    opts = SolverOptions(n=400)
    worst = np.inf
    for i in range(config.hardy_samples):
        coefficients = rng.normal(size=4)
        phi = TestFunction.from_function(lambda u: (a * a - u * u) * np.polyval(coefficients, u / a), nodes)
        result = verify_hardy_inequality(phi, pairs[i % 3], a, opts)
        worst = min(worst, result.residual)
    logger.debug("Hardy residuals: worst %.3e over %d test functions", worst, config.hardy_samples)
    return CheckResult(name="hardy-residuals", passed=bool(worst >= -1e-8), value=float(worst), tolerance=1e-8)


def _potential_inequality(config: RunConfig, rng: np.random.Generator) -> CheckResult:
    """Random draws inside the curvature box of the configured surface, or of a torus with tube radius 2a."""
    a = config.a
    if config.surface is not None:
        summary = curvature_summary(config.surface.build(), config.resolution)
    else:
        summary = curvature_summary(build_surface("torus", {"R": 8 * a, "r": 2 * a}), config.resolution)
    require_layer_hypothesis(summary, a)
    u = np.linspace(-a, a, 401)
    k1 = rng.uniform(summary.k1_minus, summary.k1_plus, config.draws)
    k2 = rng.uniform(summary.k2_minus, summary.k2_plus, config.draws)
    worst = min(potential_min_margin(x, y, summary, u, a) for x, y in zip(k1, k2))
    return CheckResult(
        name="potential-inequality", passed=bool(worst >= -1e-12), value=worst, tolerance=1e-12,
        detail=f"{config.draws} draws in the box of {summary.surface}",
    )
