import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from pydantic import ValidationError
from scipy.linalg import eigh_tridiagonal

from .coefficients import potential_at, potential_values, weight_at
from .eigen import smallest_generalized_eigenpair
from .errors import InputError, NumericalError, SingularityError
from .quadrature import element_integrals, weighted_mass
from .profiles import composite_nodes, psi_epsilon_profile, psi_epsilon_values, rayleigh_quotient_weighted
from .solve import lambda1, lambda1_potential, lambda1_weighted, richardson_limit
from .types import CurvaturePair, GridSpec, SolverOptions, TestFunction

FLAT = np.pi ** 2 / 4

curvature = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)


def pair(k1, k2):
    return CurvaturePair(kappa1=k1, kappa2=k2)


# ----- coefficients -----

@pytest.mark.parametrize("k1,k2", [(0.3, -0.7), (1.0, 1.0), (-1.0, 0.2)])
def test_weight_is_one_at_centre(k1, k2):
    assert weight_at(0.0, pair(k1, k2), 1.0) == 1.0


def test_weight_flat_and_degenerate():
    assert weight_at(0.3, pair(0.0, 0.0), 1.0) == 1.0
    for u in np.linspace(-2.0, 2.0, 9):
        assert weight_at(u, pair(-0.5, 0.5), 2.0) == pytest.approx(1 - u * u / 4, abs=1e-15)


def test_weight_outside_interval():
    with pytest.raises(InputError):
        weight_at(1.5, pair(0.1, 0.1), 1.0)


@given(u=st.floats(min_value=-0.95, max_value=0.95), k=curvature)
def test_potential_vanishes_for_equal_curvatures(u, k):
    assert potential_at(u, pair(k, k)) == 0.0


def test_potential_at_centre_and_hardy_pair():
    assert potential_at(0.0, pair(0.4, -0.8)) == pytest.approx(-(1.2 ** 2) / 4)
    for u in [-0.9, -0.3, 0.0, 0.5, 0.99]:
        assert potential_at(u, pair(1.0, -1.0)) == pytest.approx(-1.0 / (1 - u * u) ** 2, rel=1e-13)


@given(u=st.floats(min_value=-0.9, max_value=0.9).filter(lambda u: abs(u) > 1e-3), k1=curvature, k2=curvature)
def test_factored_potential_matches(u, k1, k2):
    p = pair(k1, k2)
    assert potential_at(u, p, factored=True) == pytest.approx(potential_at(u, p), rel=1e-9, abs=1e-12)
    assert potential_at(u, p) <= 0.0


def test_potential_singular_at_degenerate_endpoint():
    with pytest.raises(SingularityError):
        potential_at(1.0, pair(1.0, 0.0))
    with pytest.raises(SingularityError):
        potential_values(np.array([0.0, -1.0]), pair(0.0, -1.0))


# ----- types -----

def test_grid_spec():
    grid = GridSpec(n=9, a=2.0)
    nodes = grid.nodes()
    assert nodes[0] == -2.0 and nodes[-1] == 2.0
    assert grid.h == pytest.approx(0.4)
    assert grid.refined().h == pytest.approx(grid.h / 2, rel=1e-15)
    with pytest.raises(ValidationError):
        GridSpec(n=2, a=1.0)
    with pytest.raises(ValidationError):
        GridSpec(n=10, a=0.0)


def test_test_function_requires_zero_endpoints():
    with pytest.raises(ValidationError):
        TestFunction(nodes=[-1.0, 0.0, 1.0], samples=[0.1, 1.0, 0.0])
    with pytest.raises(ValidationError):
        TestFunction(nodes=[-1.0, 0.5, 0.0, 1.0], samples=[0.0, 1.0, 1.0, 0.0])
    with pytest.raises(InputError):
        TestFunction.from_function(lambda u: 1.0 + 0 * u, np.linspace(-1, 1, 5))


def test_admissibility():
    assert pair(1.0, -1.0).is_admissible(1.0)
    assert not pair(0.6, 0.0).is_admissible(2.0)
    assert pair(1.0, 0.0).degenerate_endpoints(1.0) == (False, True)
    assert pair(0.0, -0.5).degenerate_endpoints(2.0) == (True, False)
    with pytest.raises(InputError):
        lambda1(pair(1.5, 0.0), 1.0)


# ----- eigensolver -----

def test_identity_pencil():
    identity = (np.ones(7), np.zeros(6))
    result = smallest_generalized_eigenpair(identity, identity)
    assert result.value == pytest.approx(1.0, rel=1e-14)
    assert result.vector[0] > 0


def test_identity_pencil_iteration_cap():
    identity = (np.ones(7), np.zeros(6))
    with pytest.raises(NumericalError) as info:
        smallest_generalized_eigenpair(identity, identity, max_iter=1)
    assert "last_value" in info.value.diagnostics


def test_flat_stiffness_matches_closed_form():
    n, a = 400, 1.0
    h = 2 * a / (n + 1)
    K = (np.full(n, 2.0 / h), np.full(n - 1, -1.0 / h))
    M = (np.full(n, 4.0 * h / 6), np.full(n - 1, h / 6))
    theta = np.pi / (n + 1)
    expected = 6.0 / h ** 2 * (1 - np.cos(theta)) / (2 + np.cos(theta))
    result = smallest_generalized_eigenpair(K, M)
    assert result.value == pytest.approx(expected, rel=1e-9)
    assert np.all(result.vector > 0)


def test_matches_dense_tridiagonal_solve():
    n = 200
    h = 1.0 / (n + 1)
    diag = 2.0 / h ** 2 + np.linspace(0.0, 5.0, n)
    off = np.full(n - 1, -1.0 / h ** 2)
    M = (np.ones(n), np.zeros(n - 1))
    expected = eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=(0, 0))[0]
    assert smallest_generalized_eigenpair((diag, off), M).value == pytest.approx(expected, rel=1e-9)


def test_indefinite_mass_rejected():
    K = (np.ones(4), np.zeros(3))
    with pytest.raises(InputError):
        smallest_generalized_eigenpair(K, (np.array([1.0, -1.0, 1.0, 1.0]), np.zeros(3)))
    with pytest.raises(InputError):
        smallest_generalized_eigenpair(K, (np.ones(3), np.zeros(2)))


# ----- solvers -----

def test_weighted_flat_converges():
    result = lambda1_weighted(pair(0.0, 0.0), 1.0, GridSpec(n=2000, a=1.0))
    assert result.method == "weighted-FE"
    assert result.lambda1 == pytest.approx(FLAT, rel=1e-6)
    assert result.lambda1 > FLAT
    assert np.all(np.asarray(result.eigenvector) > 0)


def test_eigenvector_has_unit_weighted_norm():
    p = pair(0.4, -0.2)
    result = lambda1_weighted(p, 1.0, GridSpec(n=100, a=1.0))
    psi = result.to_test_function(1.0)
    integrals = element_integrals(np.asarray(psi.nodes), p)
    assert weighted_mass(np.asarray(psi.samples), integrals) == pytest.approx(1.0, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(k1=curvature, k2=curvature)
def test_symmetry_is_exact(k1, k2):
    grid = GridSpec(n=60, a=1.0)
    assert lambda1_weighted(pair(k1, k2), 1.0, grid).lambda1 == lambda1_weighted(pair(k2, k1), 1.0, grid).lambda1


@settings(max_examples=25, deadline=None)
@given(k1=curvature, k2=curvature)
def test_reflection(k1, k2):
    grid = GridSpec(n=80, a=1.0)
    forward = lambda1_weighted(pair(k1, k2), 1.0, grid).lambda1
    reflected = lambda1_weighted(pair(-k1, -k2), 1.0, grid).lambda1
    assert reflected == pytest.approx(forward, rel=1e-10)


def test_potential_symmetric_pair():
    grid = GridSpec(n=500, a=1.0)
    forward = lambda1_potential(pair(0.3, -0.3), 1.0, grid)
    backward = lambda1_potential(pair(-0.3, 0.3), 1.0, grid)
    assert forward.method == "potential-FD"
    assert backward.lambda1 == pytest.approx(forward.lambda1, rel=1e-10)
    assert lambda1_potential(pair(0.0, 0.0), 1.0, grid).lambda1 == pytest.approx(FLAT, rel=1e-5)


def test_potential_rejects_near_degenerate_pairs():
    with pytest.raises(InputError, match="lambda1_weighted"):
        lambda1_potential(pair(0.995, 0.0), 1.0, GridSpec(n=50, a=1.0))


def test_richardson_limit_removes_h2_term():
    values = [1.0 + 0.3 * h ** 2 for h in (0.1, 0.05)]
    assert richardson_limit(2.0, values) == pytest.approx(1.0, abs=1e-14)
    assert richardson_limit(2.0, [5.0]) == 5.0


# ----- dispatcher -----

@pytest.mark.parametrize("kappa", [0.0, 0.3, 0.7])
def test_equal_curvature_identity(kappa):
    result = lambda1(pair(kappa, kappa), 1.0)
    assert result.extrapolated and result.converged
    assert result.lambda1 == pytest.approx(FLAT, rel=1e-8)
    assert abs(result.lambda1 - FLAT) <= 10 * result.error_estimate
    assert result.cross_check is not None


def test_flat_error_estimate():
    result = lambda1(pair(0.0, 0.0), 1.0, SolverOptions(n=2000))
    assert result.error_estimate < 1e-8
    assert [n for n, _ in result.raw_values] == [2000, 4001, 8003]


def test_grid_convergence_is_second_order():
    result = lambda1(pair(0.5, -0.2), 1.0, SolverOptions(n=200))
    values = [value for _, value in result.raw_values]
    ratio = (values[0] - values[1]) / (values[1] - values[2])
    assert ratio == pytest.approx(4.0, rel=1e-2)


@pytest.mark.parametrize("k1,k2", [(0.8, 0.0), (0.5, -0.5), (-0.8, 0.8), (0.2, 0.6)])
def test_cross_form_agreement(k1, k2):
    result = lambda1(pair(k1, k2), 1.0)
    assert result.cross_check.discrepancy <= 1e-6 * result.lambda1
    assert result.cross_check.potential_lambda1 == pytest.approx(result.lambda1, rel=1e-6)


def test_nonnegative_for_same_sign_curvatures():
    for k1, k2 in [(0.9, 0.1), (-0.5, -1.0), (0.0, 1.0)]:
        assert lambda1(pair(k1, k2), 1.0, SolverOptions(n=300)).lambda1 >= 0.0


def test_single_degenerate_endpoint_is_free():
    result = lambda1(pair(1.0, 0.0), 1.0, SolverOptions(n=1000))
    assert result.free_endpoints == (False, True)
    assert result.nodes[-1] == 1.0
    assert result.cross_check is None
    assert result.converged
    with pytest.raises(InputError):
        result.to_test_function(1.0)


def test_degenerate_pair_decreases():
    values = [lambda1_weighted(pair(-1.0, 1.0), 1.0, GridSpec(n=n, a=1.0)).lambda1 for n in (500, 1000, 2000, 4000, 8000)]
    assert all(b < a for a, b in zip(values, values[1:]))
    assert values[-1] < 0.4


def test_degenerate_pair_reported_raw():
    result = lambda1(pair(-1.0, 1.0), 1.0, SolverOptions(n=500))
    assert result.convergence == "raw-decreasing"
    assert not result.extrapolated and not result.converged
    assert result.lambda1 == result.raw_values[-1][1]


def test_forced_dirichlet_condition():
    free = lambda1(pair(0.0, 1.0), 1.0, SolverOptions(n=400))
    forced = lambda1(pair(0.0, 1.0), 1.0, SolverOptions(n=400, endpoint_condition="dirichlet"))
    assert forced.free_endpoints == (False, False)
    assert forced.convergence in ("raw-decreasing", "raw-nonmonotone")
    assert forced.lambda1 > free.lambda1


# ----- Rayleigh quotient and cut-off profile -----

def test_quotient_of_eigenvector_is_eigenvalue():
    p = pair(0.6, -0.3)
    grid = GridSpec(n=150, a=1.0)
    result = lambda1_weighted(p, 1.0, grid)
    assert rayleigh_quotient_weighted(result.to_test_function(1.0), p, 1.0) == pytest.approx(result.lambda1, rel=1e-13)


def test_quotient_of_flat_minimizer():
    psi = TestFunction.from_function(lambda u: np.cos(np.pi * u / 2), GridSpec(n=400, a=1.0).nodes())
    assert rayleigh_quotient_weighted(psi, pair(0.0, 0.0), 1.0) == pytest.approx(FLAT, rel=2e-5)


def test_quotient_rejects_zero_function():
    with pytest.raises(InputError):
        rayleigh_quotient_weighted(TestFunction(nodes=[-1.0, 0.0, 1.0], samples=[0.0, 0.0, 0.0]), pair(0.0, 0.0), 1.0)


@settings(max_examples=40, deadline=None)
@given(
    k1=curvature,
    k2=curvature,
    interior=st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=20, max_size=20).filter(
        lambda xs: max(abs(x) for x in xs) > 1e-3
    ),
)
def test_variational_bound(k1, k2, interior):
    p = pair(k1, k2)
    grid = GridSpec(n=20, a=1.0)
    psi = TestFunction(nodes=grid.nodes().tolist(), samples=[0.0] + interior + [0.0])
    bound = lambda1_weighted(p, 1.0, grid).lambda1
    assert rayleigh_quotient_weighted(psi, p, 1.0) >= bound - 1e-9 * max(1.0, abs(bound))


@pytest.mark.parametrize("eps", [1e-2, 1e-3, 1e-4])
def test_psi_epsilon_branches(eps):
    a = 1.0
    assert psi_epsilon_values(0.0, eps, a) == pytest.approx(1.0, abs=1e-14)
    assert psi_epsilon_values(a - eps, eps, a) == pytest.approx(1.0, abs=1e-12)
    assert psi_epsilon_values(-(a - eps * eps), eps, a) == pytest.approx(0.0, abs=1e-7)
    u = np.linspace(-a, a, 101)
    np.testing.assert_allclose(psi_epsilon_values(u, eps, a), psi_epsilon_values(-u, eps, a))


def test_psi_epsilon_profile_on_composite_grid():
    grid = GridSpec(n=100, a=1.0)
    psi = psi_epsilon_profile(1e-3, 1.0, grid)
    nodes = np.asarray(psi.nodes)
    assert nodes[0] == -1.0 and nodes[-1] == 1.0
    assert np.all(np.diff(nodes) > 0)
    for radius in (1 - 1e-3, 1 - 1e-6):
        assert np.min(np.abs(nodes - radius)) < 1e-14
        assert np.min(np.abs(nodes + radius)) < 1e-14
    assert nodes.size > grid.n + 2 + 2 * 32 * 3
    np.testing.assert_array_equal(nodes, composite_nodes(1e-3, 1.0, grid))


def test_psi_epsilon_quotient_on_degenerate_pair():
    from oracles.annulus import psi_epsilon_quotient_closed_form

    psi = psi_epsilon_profile(1e-3, 1.0, GridSpec(n=2000, a=1.0))
    value = rayleigh_quotient_weighted(psi, pair(-1.0, 1.0), 1.0)
    assert 0.4 < value < psi_epsilon_quotient_closed_form(1e-3, 1.0)


def test_psi_epsilon_out_of_range():
    grid = GridSpec(n=10, a=0.5)
    with pytest.raises(InputError):
        psi_epsilon_profile(0.5, 0.5, grid)
    with pytest.raises(InputError):
        psi_epsilon_profile(0.0, 0.5, grid)
    with pytest.raises(InputError, match="does not match"):
        psi_epsilon_profile(1e-3, 1.0, grid)
