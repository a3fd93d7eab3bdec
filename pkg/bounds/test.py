import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import eigh_tridiagonal

from geometry.curvature import curvature_summary
from geometry.surfaces import build_surface
from geometry.types import CurvatureSummary
from oracles.annulus import annulus_lowest_eigenvalue
from oracles.bessel import bessel_j0
from oracles.errors import DomainError
from oracles.types import AnnulusSpec
from transverse.coefficients import potential_values
from transverse.errors import InputError, SingularityError
from transverse.profiles import psi_epsilon_profile
from transverse.solve import lambda1
from transverse.types import CurvaturePair, GridSpec, SolverOptions, TestFunction

from . import hardy as hardy_module
from .errors import HypothesisError, QuadratureError
from .floor import bessel_j0_first_zero, faber_krahn_floor
from .hardy import (
    _split,
    hardy_weights,
    hardy_weights_at,
    potential_min_inequality_check,
    potential_min_margin,
    verify_hardy_inequality,
)
from .theorem import pointwise_lambda1_profile, single_curvature_reduction_check, theorem1_bound

FLAT = np.pi ** 2 / 4
FLOOR_1 = 2.404825557695773 ** 2 / 4


def box(k1_minus, k1_plus, k2_minus, k2_plus):
    return CurvatureSummary(
        k1_plus=k1_plus, k1_minus=k1_minus, k2_plus=k2_plus, k2_minus=k2_minus,
        max_abs=max(abs(k1_minus), abs(k1_plus), abs(k2_minus), abs(k2_plus)),
        sample_resolution=(16, 16),
    )


def dense_potential_eigenvalue(pair, a, n=4000):
    h = 2 * a / (n + 1)
    u = np.linspace(-a, a, n + 2)[1:-1]
    diagonal = 2 / h ** 2 + potential_values(u, pair)
    off = np.full(n - 1, -1 / h ** 2)
    return float(eigh_tridiagonal(diagonal, off, eigvals_only=True, select='i', select_range=(0, 0))[0])


# ----- floor -----

def test_first_zero():
    j01 = bessel_j0_first_zero()
    assert j01 == pytest.approx(2.404825557695773, abs=1e-12)
    assert abs(bessel_j0(j01)) < 1e-13


@pytest.mark.parametrize("a,factor", [(1.0, 1.0), (0.5, 4.0), (2.0, 0.25)])
def test_floor_scaling(a, factor):
    assert faber_krahn_floor(a) == pytest.approx(factor * FLOOR_1, rel=1e-13)
    assert faber_krahn_floor(1.0) == pytest.approx(1.4458, abs=1e-4)


def test_floor_and_monotonicity_in_one_curvature():
    kappas = np.linspace(0.05, 1.0, 20)
    values = np.array([lambda1(CurvaturePair(kappa1=0.0, kappa2=k), 1.0).lambda1 for k in kappas])
    assert np.all(np.diff(values) <= 1e-9)
    assert np.all(values >= faber_krahn_floor(1.0) - 1e-6)
    assert values[-1] == pytest.approx(FLOOR_1, rel=1e-4)


# ----- the bound -----

@pytest.mark.parametrize("name,params", [("sphere", {"R": 2.0}), ("plane", {})])
def test_optimal_for_umbilic_surfaces(name, params):
    report = theorem1_bound(curvature_summary(build_surface(name, params), 32), 1.0)
    assert report.lower_bound == pytest.approx(FLAT, rel=1e-8)


@pytest.mark.parametrize("name,params", [("sphere", {"R": 2.0}), ("cylinder", {"R": 2.0})])
@pytest.mark.parametrize("resolution", [32, 64])
def test_tied_branches_survive_orientation_flip(name, params, resolution):
    surface = build_surface(name, params)
    report = theorem1_bound(curvature_summary(surface, resolution), 1.0)
    flipped = theorem1_bound(curvature_summary(surface.flipped(), resolution), 1.0)
    assert report.branch == flipped.branch == "k1_plus,k2_minus"
    assert flipped.lower_bound == pytest.approx(report.lower_bound, rel=1e-10)


def test_corners_equal_up_to_rounding_are_one_corner():
    report = theorem1_bound(box(1e-17, 2e-17, 0.5, 0.5 + 1e-16), 1.0)
    assert report.branch == "k1_plus,k2_minus"
    assert report.lambda_branch_values[0] == report.lambda_branch_values[1]
    assert report.floor == pytest.approx(FLOOR_1)
    assert report.lower_bound >= report.floor
    assert report.hypothesis.passed


def test_cylinder_matches_annulus():
    report = theorem1_bound(curvature_summary(build_surface("cylinder", {"R": 2.0}), 32), 1.0)
    expected = annulus_lowest_eigenvalue(AnnulusSpec(r_in=1.0, r_out=3.0))
    assert report.lower_bound == pytest.approx(expected, rel=1e-6)
    assert report.floor is not None and report.lower_bound >= report.floor


def test_torus_branches_against_dense_solve():
    summary = curvature_summary(build_surface("torus", {"R": 2.0, "r": 0.5}), 64)
    report = theorem1_bound(summary, 0.25)
    assert report.floor is None
    assert report.lower_bound == min(report.lambda_branch_values)
    for branch in report.branches:
        assert branch.lambda1 == pytest.approx(dense_potential_eigenvalue(branch.pair, 0.25), rel=1e-5)
    assert report.branches[0].pair.kappa1 == pytest.approx(0.4)
    assert report.branches[1].pair.kappa1 == pytest.approx(-2 / 3)


def test_hypothesis_failure():
    summary = curvature_summary(build_surface("sphere", {"R": 2.0}), 32)
    with pytest.raises(HypothesisError) as info:
        theorem1_bound(summary, 2.5)
    assert info.value.diagnostic.product == pytest.approx(1.25)
    assert not info.value.diagnostic.passed


def test_branch_invariant_under_orientation_flip():
    torus = build_surface("torus", {"R": 2.0, "r": 0.5})
    report = theorem1_bound(curvature_summary(torus, 64), 0.25)
    flipped = theorem1_bound(curvature_summary(torus.flipped(), 64), 0.25)
    assert flipped.branch == report.branch
    assert flipped.lower_bound == pytest.approx(report.lower_bound, rel=1e-9)


@pytest.mark.parametrize("summary", [box(0.0, 0.2, 0.3, 0.6), box(0.4, 0.4, 0.4, 0.9), box(-0.7, -0.5, -0.5, 0.0)])
def test_floor_for_one_signed_curvature(summary):
    report = theorem1_bound(summary, 1.0)
    assert report.floor is not None
    assert report.lower_bound >= report.floor - 10 * report.solver_error


def test_no_floor_for_mixed_signs():
    assert theorem1_bound(box(-0.3, 0.1, 0.2, 0.5), 1.0).floor is None


# ----- supporting checks -----

@pytest.mark.parametrize("k1,k2", [(0.3, 0.6), (-0.4, -0.2), (0.5, 0.0), (0.9, 0.9)])
def test_single_curvature_reduction(k1, k2):
    check = single_curvature_reduction_check(k1, k2, 1.0)
    assert check.holds
    assert check.value >= min(check.first_only, check.second_only) - check.tolerance


def test_reduction_needs_equal_signs():
    with pytest.raises(InputError):
        single_curvature_reduction_check(0.3, -0.3, 1.0)


def test_pointwise_profile_dominates_bound():
    torus = build_surface("torus", {"R": 2.0, "r": 0.5})
    report = theorem1_bound(curvature_summary(torus, 16), 0.25)
    profile = pointwise_lambda1_profile(torus, 0.25, 16)
    assert profile.minimum >= report.lower_bound - 1e-8 * report.lower_bound
    # both corners of the box are sample points of the torus
    assert profile.minimum == pytest.approx(report.lower_bound, rel=1e-8)
    assert profile.distinct_pairs <= 16


def test_pointwise_profile_hypothesis():
    with pytest.raises(HypothesisError):
        pointwise_lambda1_profile(build_surface("sphere", {"R": 1.0}), 1.5, 16)


# ----- Hardy weights -----

def test_hardy_weight_examples():
    assert hardy_weights_at(0.0, 1.0) == (1.0, 0.25)
    optimal, classical = hardy_weights_at(0.9, 1.0)
    assert optimal == pytest.approx(1 / 0.19 ** 2)
    assert classical == pytest.approx(25.0)
    with pytest.raises(DomainError):
        hardy_weights_at(1.0, 1.0)


def test_hardy_weight_dominance():
    rng = np.random.default_rng(7)
    u = rng.uniform(-1.0, 1.0, 10_000) * (1 - 1e-9)
    optimal, classical = hardy_weights(u, 1.0)
    assert np.all(optimal >= classical)


@settings(deadline=None)
@given(u=st.floats(min_value=-0.999, max_value=0.999), a=st.floats(min_value=0.1, max_value=10.0))
def test_hardy_weight_ratio(u, a):
    optimal, classical = hardy_weights_at(u * a, a)
    assert optimal / classical == pytest.approx(4 * a * a / (a + abs(u * a)) ** 2, rel=1e-9)


# ----- Hardy-Poincare inequality -----

def test_hardy_equality_case():
    nodes = GridSpec(n=2000, a=1.0).nodes()
    phi = TestFunction.from_function(lambda u: np.cos(np.pi * u / 2), nodes)
    result = verify_hardy_inequality(phi, CurvaturePair(kappa1=0.0, kappa2=0.0), 1.0)
    assert result.potential_term == 0.0
    assert result.holds
    assert result.residual == pytest.approx(0.0, abs=1e-5)


def test_hardy_cutoff_profile_on_degenerate_pair():
    psi = psi_epsilon_profile(1e-3, 1.0, GridSpec(n=1000, a=1.0))
    result = verify_hardy_inequality(psi, CurvaturePair(kappa1=-1.0, kappa2=1.0), 1.0)
    assert result.lambda1_source == "limit"
    assert result.lambda1 == 0.0
    assert result.residual >= 0.0


def test_hardy_random_polynomials():
    rng = np.random.default_rng(2024)
    pairs = [CurvaturePair(kappa1=0.0, kappa2=0.0), CurvaturePair(kappa1=0.5, kappa2=-0.5),
             CurvaturePair(kappa1=1.0, kappa2=-1.0)]
    nodes = GridSpec(n=400, a=1.0).nodes()
    opts = SolverOptions(n=400)
    for i in range(100):
        coefficients = rng.normal(size=4)
        phi = TestFunction.from_function(lambda u: (1 - u * u) * np.polyval(coefficients, u), nodes)
        result = verify_hardy_inequality(phi, pairs[i % 3], 1.0, opts)
        assert result.residual >= -1e-8
        assert result.holds


def test_hardy_rejects_bad_inputs():
    nodes = GridSpec(n=10, a=1.0).nodes()
    zero = TestFunction(nodes=nodes.tolist(), samples=[0.0] * nodes.size)
    with pytest.raises(InputError):
        verify_hardy_inequality(zero, CurvaturePair(kappa1=0.0, kappa2=0.0), 1.0)
    phi = TestFunction.from_function(lambda u: 1 - u * u, nodes)
    with pytest.raises(InputError):
        verify_hardy_inequality(phi, CurvaturePair(kappa1=0.0, kappa2=0.0), 2.0)


def test_hardy_quadrature_failure(monkeypatch):
    monkeypatch.setattr(hardy_module, "QUADRATURE_TOL", -1.0)
    psi = psi_epsilon_profile(1e-2, 1.0, GridSpec(n=100, a=1.0))
    with pytest.raises(QuadratureError):
        verify_hardy_inequality(psi, CurvaturePair(kappa1=-1.0, kappa2=1.0), 1.0)


def test_split_keeps_function():
    nodes = np.array([-1.0, -0.2, 0.5, 1.0])
    samples = np.array([0.0, 0.7, -0.3, 0.0])
    fine_nodes, fine_samples = _split(nodes, samples)
    assert fine_nodes.size == 7
    np.testing.assert_allclose(np.interp(fine_nodes, nodes, samples), fine_samples, atol=1e-15)


# ----- pointwise potential inequality -----

def test_potential_inequality_equal_curvatures():
    extrema = box(0.0, 0.5, 0.5, 1.0)
    u = np.linspace(-0.9, 0.9, 101)
    assert potential_min_inequality_check(0.5, 0.5, extrema, u, a=0.9)


def test_potential_inequality_corner_is_equality():
    extrema = box(-0.4, 0.2, 0.3, 0.8)
    u = np.linspace(-0.9, 0.9, 101)
    assert potential_min_margin(0.2, 0.3, extrema, u, a=0.9) >= 0.0
    assert potential_min_inequality_check(0.2, 0.3, extrema, u, a=0.9)


def test_potential_inequality_random_torus_draws():
    summary = curvature_summary(build_surface("torus", {"R": 2.0, "r": 0.5}), 64)
    a = 0.25
    u = np.linspace(-a, a, 401)
    rng = np.random.default_rng(11)
    k1 = rng.uniform(summary.k1_minus, summary.k1_plus, 10_000)
    k2 = rng.uniform(summary.k2_minus, summary.k2_plus, 10_000)
    margins = [potential_min_margin(x, y, summary, u, a) for x, y in zip(k1, k2)]
    assert min(margins) >= -1e-12


def test_potential_inequality_errors():
    extrema = box(-0.4, 0.2, 0.3, 0.8)
    with pytest.raises(InputError):
        potential_min_inequality_check(0.5, 0.5, extrema, [0.1], a=0.9)
    with pytest.raises(SingularityError):
        potential_min_inequality_check(0.0, 0.5, extrema, [1.25], a=1.25)


def test_ties_go_to_first_branch():
    report = theorem1_bound(box(0.3, 0.3, 0.3, 0.3), 1.0)
    assert report.branch == "k1_plus,k2_minus"
    assert report.lambda_branch_values[0] == report.lambda_branch_values[1]
    assert report.lower_bound == pytest.approx(FLAT, rel=1e-8)
