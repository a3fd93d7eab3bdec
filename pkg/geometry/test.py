import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from pydantic import ValidationError

from .curvature import (
    FormArrays,
    _principal,
    check_layer_hypothesis,
    curvature_samples,
    curvature_summary,
    fundamental_forms_at,
    principal_curvatures_at,
)
from .errors import ChartError, CurvatureConsistencyError, ImmersionError
from .surfaces import build_surface, load_sampled_chart, write_sampled_chart
from .types import CurvatureSummary, FundamentalForms, ParametricSurface


def rotation_about(axis, angle):
    axis = np.asarray(axis, dtype=float) / np.linalg.norm(axis)
    k = np.array([[0, -axis[2], axis[1]], [axis[2], 0, -axis[0]], [-axis[1], axis[0], 0]])
    return np.eye(3) + np.sin(angle) * k + (1 - np.cos(angle)) * k @ k


def constant_summary(value):
    return CurvatureSummary(
        k1_plus=value, k1_minus=value, k2_plus=value, k2_minus=value,
        max_abs=abs(value), sample_resolution=(16, 16),
    )


# ----- fundamental forms -----

def test_plane_forms():
    forms = fundamental_forms_at(build_surface("plane"), 0.2, -0.7)
    assert (forms.E, forms.F, forms.G) == (1.0, 0.0, 1.0)
    assert (forms.L, forms.M, forms.N) == (0.0, 0.0, 0.0)
    pair = principal_curvatures_at(forms)
    assert (pair.k1, pair.k2) == (0.0, 0.0)


@pytest.mark.parametrize("p,q", [(0.3, 0.4), (2.0, 1.5), (5.5, 2.9)])
def test_sphere_is_umbilic(p, q):
    forms = fundamental_forms_at(build_surface("sphere", {"R": 2.0}), p, q)
    assert forms.L / forms.E == pytest.approx(0.5, rel=1e-12)
    assert forms.N / forms.G == pytest.approx(0.5, rel=1e-12)
    pair = principal_curvatures_at(forms)
    assert pair.k1 == pytest.approx(0.5, rel=1e-12)
    assert pair.k2 == pytest.approx(0.5, rel=1e-12)


def test_cylinder_normal_curvatures():
    forms = fundamental_forms_at(build_surface("cylinder", {"R": 3.0}), 0.1, 1.0)
    assert forms.L / forms.E == pytest.approx(0.0, abs=1e-15)
    assert forms.N / forms.G == pytest.approx(1 / 3, rel=1e-12)


def test_torus_outer_circle():
    pair = principal_curvatures_at(fundamental_forms_at(build_surface("torus", {"R": 2.0, "r": 0.5}), 0.0, 0.7))
    assert pair.k1 == pytest.approx(1 / 2.5, rel=1e-12)
    assert pair.k2 == pytest.approx(2.0, rel=1e-12)


def test_degenerate_chart_point():
    with pytest.raises(ImmersionError) as info:
        fundamental_forms_at(build_surface("sphere", {"R": 1.0}), 0.5, 0.0)
    assert info.value.point == (0.5, 0.0)
    with pytest.raises(ValidationError):
        FundamentalForms(E=1.0, F=1.0, G=1.0, L=0.0, M=0.0, N=0.0)


def test_point_outside_domain():
    with pytest.raises(ChartError):
        fundamental_forms_at(build_surface("cylinder", {"R": 1.0}), 1.5, 0.0)
    # periodic axes wrap
    fundamental_forms_at(build_surface("cylinder", {"R": 1.0}), 0.5, 10.0)


def test_umbilic_forms_clamp_radicand():
    forms = FundamentalForms(E=3.0, F=0.3, G=1.7, L=0.3, M=0.03, N=0.17)
    pair = principal_curvatures_at(forms)
    assert pair.k1 == pytest.approx(0.1, rel=1e-6)
    assert pair.k2 == pytest.approx(0.1, rel=1e-6)


def test_negative_radicand_rejected():
    # indefinite metric, only reachable by calling the kernel directly
    forms = FormArrays(*(np.array(v) for v in (1.0, 0.0, -1.0, 0.0, 1.0, 0.0)))
    with pytest.raises(CurvatureConsistencyError):
        _principal(forms)


# ----- summaries -----

def test_sphere_summary():
    summary = curvature_summary(build_surface("sphere", {"R": 2.0}), 32)
    for value in (summary.k1_plus, summary.k1_minus, summary.k2_plus, summary.k2_minus):
        assert value == pytest.approx(0.5, rel=1e-12)
    assert summary.max_abs == pytest.approx(0.5, rel=1e-12)
    assert summary.sample_resolution == (32, 32)
    assert not summary.sampled_patch_only


def test_cylinder_summary():
    summary = curvature_summary(build_surface("cylinder", {"R": 1.0}), 16)
    assert summary.k1_plus == pytest.approx(0.0, abs=1e-14)
    assert summary.k1_minus == pytest.approx(0.0, abs=1e-14)
    assert summary.k2_plus == pytest.approx(1.0, rel=1e-12)
    assert summary.k2_minus == pytest.approx(1.0, rel=1e-12)


def test_torus_summary_closed_form():
    summary = curvature_summary(build_surface("torus", {"R": 2.0, "r": 0.5}), 256)
    assert summary.k1_minus == pytest.approx(-2 / 3, abs=1e-6)
    assert summary.k1_plus == pytest.approx(2 / 5, abs=1e-6)
    assert summary.k2_minus == pytest.approx(2.0, abs=1e-6)
    assert summary.k2_plus == pytest.approx(2.0, abs=1e-6)
    assert summary.max_abs == pytest.approx(2.0, abs=1e-6)
    assert summary.locations["k1_minus"][0] == pytest.approx(np.pi)
    assert summary.locations["k1_plus"][0] == 0.0


def test_torus_extrema_resolution_independent():
    torus = build_surface("torus", {"R": 2.0, "r": 0.5})
    coarse = curvature_summary(torus, 64)
    fine = curvature_summary(torus, 128)
    for name in ("k1_plus", "k1_minus", "k2_plus", "k2_minus"):
        assert getattr(fine, name) == pytest.approx(getattr(coarse, name), abs=1e-9)


@pytest.mark.parametrize("name,params", [
    ("torus", {"R": 3.0, "r": 1.0}),
    ("catenoid", {"c": 1.5}),
    ("paraboloid", {"c": 0.7}),
    ("sphere", {"R": 1.3}),
])
def test_gauss_and_mean_consistency(name, params):
    samples = curvature_samples(build_surface(name, params), 24)
    np.testing.assert_allclose(samples.k1 * samples.k2, samples.gauss, rtol=1e-9, atol=1e-12)
    np.testing.assert_allclose((samples.k1 + samples.k2) / 2, samples.mean, rtol=1e-9, atol=1e-12)
    assert np.all(samples.k1 <= samples.k2)


def test_catenoid_is_minimal():
    samples = curvature_samples(build_surface("catenoid", {"c": 1.0}), 32)
    np.testing.assert_allclose(samples.mean, 0.0, atol=1e-12)
    np.testing.assert_allclose(samples.k2, 1 / np.cosh(samples.p) ** 2, rtol=1e-10)
    summary = curvature_summary(build_surface("catenoid", {"c": 1.0}), 32)
    assert summary.sampled_patch_only
    assert summary.k1_plus == pytest.approx(-summary.k2_minus)


def test_paraboloid_vertex():
    surface = build_surface("paraboloid", {"c": 0.5})
    pair = principal_curvatures_at(fundamental_forms_at(surface, 0.0, 0.0))
    assert pair.k1 == pytest.approx(1.0) and pair.k2 == pytest.approx(1.0)


@pytest.mark.parametrize("name,params", [("torus", {"R": 2.0, "r": 0.5}), ("paraboloid", {"c": 0.4}), ("cylinder", {"R": 2.0})])
def test_orientation_flip(name, params):
    surface = build_surface(name, params)
    summary = curvature_summary(surface, 32)
    flipped = curvature_summary(surface.flipped(), 32)
    expected = summary.flipped()
    for field in ("k1_plus", "k1_minus", "k2_plus", "k2_minus", "max_abs"):
        assert getattr(flipped, field) == pytest.approx(getattr(expected, field), abs=1e-14)
    assert flipped.k1_plus == pytest.approx(-summary.k2_minus, abs=1e-14)
    assert flipped.k2_minus == pytest.approx(-summary.k1_plus, abs=1e-14)


@settings(max_examples=10, deadline=None)
@given(
    angle=st.floats(min_value=-np.pi, max_value=np.pi),
    axis=st.tuples(*[st.floats(min_value=-1, max_value=1)] * 3).filter(lambda v: np.linalg.norm(v) > 0.1),
    shift=st.tuples(*[st.floats(min_value=-10, max_value=10)] * 3),
)
def test_rigid_motion_invariance(angle, axis, shift):
    torus = build_surface("torus", {"R": 2.0, "r": 0.5})
    base = curvature_samples(torus, 16)
    moved = curvature_samples(torus.moved(rotation_about(axis, angle), shift), 16)
    np.testing.assert_allclose(moved.k1, base.k1, atol=1e-9)
    np.testing.assert_allclose(moved.k2, base.k2, atol=1e-9)


def test_improper_rotation_rejected():
    with pytest.raises(ChartError):
        build_surface("plane").moved(np.diag([1.0, 1.0, -1.0]), [0, 0, 0])


def test_finite_difference_fallback():
    exact = build_surface("sphere", {"R": 2.0})
    chart_only = ParametricSurface(
        name="sphere-fd", chart=exact.chart, p_range=exact.p_range, q_range=exact.q_range, periodic=exact.periodic
    )
    assert not chart_only.has_analytic_partials
    summary = curvature_summary(chart_only, 32)
    assert summary.k1_minus == pytest.approx(0.5, rel=1e-4)
    assert summary.k2_plus == pytest.approx(0.5, rel=1e-4)


def test_resolution_too_small():
    with pytest.raises(ChartError):
        curvature_summary(build_surface("plane"), 8)


@pytest.mark.parametrize("name,params", [("sphere", {"R": -1.0}), ("torus", {"R": 1.0, "r": 2.0}), ("klein", {}), ("sphere", {"radius": 1.0})])
def test_bad_catalog_requests(name, params):
    with pytest.raises(ChartError):
        build_surface(name, params)


# ----- sampled charts -----

def test_sampled_torus_chart(tmp_path):
    path = tmp_path / "torus.txt"
    write_sampled_chart(build_surface("torus", {"R": 2.0, "r": 0.5}), path, (96, 96))
    surface = load_sampled_chart(path)
    assert surface.periodic == (True, True)
    assert surface.p_range[1] == pytest.approx(2 * np.pi)
    summary = curvature_summary(surface, 96)
    assert summary.sampled_patch_only
    assert summary.k1_minus == pytest.approx(-2 / 3, abs=1e-2)
    assert summary.k1_plus == pytest.approx(0.4, abs=1e-2)
    assert summary.k2_plus == pytest.approx(2.0, abs=1e-2)


def test_sampled_chart_reproduces_points(tmp_path):
    path = tmp_path / "paraboloid.txt"
    paraboloid = build_surface("paraboloid", {"c": 0.5})
    write_sampled_chart(paraboloid, path, (21, 21))
    surface = load_sampled_chart(path)
    assert surface.periodic == (False, False)
    np.testing.assert_allclose(surface.point(0.1, -0.35), paraboloid.point(0.1, -0.35), atol=1e-12)


def write_chart(path, surface, p, q, periodic):
    P, Q = np.meshgrid(p, q, indexing="ij")
    xyz = surface.point(P, Q)
    lines = [f"{p.size} {q.size} {int(periodic[0])} {int(periodic[1])}"]
    for i in range(p.size):
        for j in range(q.size):
            lines.append(" ".join(format(v, ".17g") for v in (P[i, j], Q[i, j], *xyz[:, i, j])))
    path.write_text("\n".join(lines) + "\n")


def test_repeated_seam_sample_is_dropped(tmp_path):
    path = tmp_path / "torus_closed.txt"
    axis = np.linspace(0.0, 2 * np.pi, 97)
    write_chart(path, build_surface("torus", {"R": 2.0, "r": 0.5}), axis, axis, (True, True))
    surface = load_sampled_chart(path)
    assert surface.p_range[1] == pytest.approx(2 * np.pi, rel=1e-12)
    assert surface.q_range[1] == pytest.approx(2 * np.pi, rel=1e-12)
    summary = curvature_summary(surface, 96)
    assert summary.k1_minus == pytest.approx(-2 / 3, abs=1e-2)
    assert summary.k1_plus == pytest.approx(0.4, abs=1e-2)
    assert summary.k2_minus == pytest.approx(2.0, abs=1e-2)
    assert summary.k2_plus == pytest.approx(2.0, abs=1e-2)


def test_periodic_axis_that_does_not_close(tmp_path):
    path = tmp_path / "torus_half.txt"
    half = np.linspace(0.0, np.pi, 32, endpoint=False)
    full = np.linspace(0.0, 2 * np.pi, 32, endpoint=False)
    write_chart(path, build_surface("torus", {"R": 2.0, "r": 0.5}), half, full, (True, True))
    with pytest.raises(ChartError):
        load_sampled_chart(path)


@pytest.mark.parametrize("content", [
    "3 3 0\n",
    "2 2 0 0\n0 0 0 0 0\n0 1 0 1 0\n1 0 1 0 0\n1 1 1 1 0\n",
    "4 4 maybe 0\n",
    "4 4 0 0\n0 0 0 0 0\n",
])
def test_malformed_chart_files(tmp_path, content):
    path = tmp_path / "bad.txt"
    path.write_text(content)
    with pytest.raises(ChartError):
        load_sampled_chart(path)


def test_missing_chart_file(tmp_path):
    with pytest.raises(ChartError):
        load_sampled_chart(tmp_path / "missing.txt")


# ----- layer hypothesis -----

def test_layer_hypothesis_examples():
    sphere = constant_summary(0.5)
    ok = check_layer_hypothesis(sphere, 1.0)
    assert ok.passed and ok.product == 0.5 and ok.margin == 0.5
    boundary = check_layer_hypothesis(sphere, 2.0)
    assert not boundary.passed and boundary.product == 1.0
    torus = curvature_summary(build_surface("torus", {"R": 2.0, "r": 0.5}), 64)
    assert check_layer_hypothesis(torus, 0.25).product == pytest.approx(0.5)
    assert check_layer_hypothesis(torus, 0.25).passed


def test_layer_hypothesis_never_raises():
    diagnostic = check_layer_hypothesis(constant_summary(1.0), -1.0)
    assert not diagnostic.passed
    assert any("injective" in note for note in diagnostic.assumptions)


def test_summary_invariants():
    with pytest.raises(ValidationError):
        CurvatureSummary(k1_plus=0.0, k1_minus=1.0, k2_plus=1.0, k2_minus=1.0, max_abs=1.0, sample_resolution=(16, 16))
    with pytest.raises(ValidationError):
        CurvatureSummary(k1_plus=2.0, k1_minus=0.0, k2_plus=1.0, k2_minus=0.0, max_abs=2.0, sample_resolution=(16, 16))
    with pytest.raises(ValidationError):
        CurvatureSummary(k1_plus=0.0, k1_minus=0.0, k2_plus=1.0, k2_minus=1.0, max_abs=3.0, sample_resolution=(16, 16))
