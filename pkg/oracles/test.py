import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError
from scipy import special

from transverse.errors import InputError
from transverse.solve import lambda1
from transverse.types import CurvaturePair, SolverOptions

from . import annulus as annulus_module
from .annulus import (
    annulus_cross_product,
    annulus_lowest_eigenvalue,
    annulus_radial_fd_eigenvalue,
    disk_lowest_eigenvalue,
    psi_epsilon_quotient_closed_form,
)
from .bessel import bessel_j0, bessel_j0_first_zero, bessel_y0
from .errors import DomainError, OracleError
from .types import AnnulusSpec

J01 = 2.404825557695773


# ----- Bessel functions -----

def test_j0_values():
    assert bessel_j0(0.0) == 1.0
    assert abs(bessel_j0(J01)) < 1e-13
    assert bessel_j0(2.0) > 0 > bessel_j0(3.0)


def test_y0_domain():
    with pytest.raises(DomainError):
        bessel_y0(0.0)
    with pytest.raises(DomainError):
        bessel_y0(np.array([1.0, -2.0]))


def test_wronskian():
    x = np.linspace(0.5, 40.0, 400)
    # J0' = -J1 and Y0' = -Y1
    wronskian = bessel_j0(x) * -special.y1(x) - -special.j1(x) * bessel_y0(x)
    np.testing.assert_allclose(wronskian, 2 / (np.pi * x), rtol=0, atol=1e-10)


# ----- annulus and disk -----

def test_annulus_spec():
    with pytest.raises(ValidationError):
        AnnulusSpec(r_in=2.0, r_out=1.0)
    with pytest.raises(ValidationError):
        AnnulusSpec(r_in=0.0, r_out=1.0)
    spec = AnnulusSpec.about_circle(0.5, 1.0)
    assert (spec.r_in, spec.r_out, spec.width) == (1.0, 3.0, 2.0)


def test_annulus_root_residual():
    spec = AnnulusSpec(r_in=1.0, r_out=3.0)
    value = annulus_lowest_eigenvalue(spec)
    assert abs(annulus_cross_product(np.sqrt(value), spec)) < 1e-10
    assert disk_lowest_eigenvalue(2.0) < value < np.pi ** 2 / 4


def test_straight_strip_limit():
    value = annulus_lowest_eigenvalue(AnnulusSpec(r_in=1e3, r_out=1e3 + 2.0))
    assert value == pytest.approx(np.pi ** 2 / 4, rel=1e-4)


def test_scaling():
    base = annulus_lowest_eigenvalue(AnnulusSpec(r_in=1.0, r_out=3.0))
    scaled = annulus_lowest_eigenvalue(AnnulusSpec(r_in=2.5, r_out=7.5))
    assert scaled == pytest.approx(base / 6.25, rel=1e-10)


def test_small_hole_approaches_disk():
    disk = disk_lowest_eigenvalue(2.0)
    gaps = [annulus_lowest_eigenvalue(AnnulusSpec(r_in=eps, r_out=2.0)) - disk for eps in (1e-2, 1e-4, 1e-8)]
    assert all(gap > 0 for gap in gaps)
    assert gaps[0] > gaps[1] > gaps[2]
    # the gap only closes like 1/log(1/eps)
    assert gaps[2] < 0.1 * disk


def test_oracles_load_without_bounds():
    code = "import sys, oracles.annulus; assert not any(m.split('.')[0] == 'bounds' for m in sys.modules)"
    subprocess.run([sys.executable, "-c", code], check=True, cwd=Path(__file__).parent.parent)


def test_disk_values():
    assert bessel_j0_first_zero() == pytest.approx(J01, abs=1e-12)
    assert disk_lowest_eigenvalue(2.0) == pytest.approx(J01 ** 2 / 4, rel=1e-13)
    assert disk_lowest_eigenvalue(1.0) == pytest.approx(5.7832, abs=1e-4)
    with pytest.raises(DomainError):
        disk_lowest_eigenvalue(0.0)


def test_radial_finite_differences_agree():
    spec = AnnulusSpec(r_in=1.0, r_out=3.0)
    assert annulus_radial_fd_eigenvalue(spec, 2000) == pytest.approx(annulus_lowest_eigenvalue(spec), rel=1e-5)


def test_no_bracket(monkeypatch):
    monkeypatch.setattr(annulus_module, "SCAN_STOP", 0.5)
    with pytest.raises(OracleError):
        annulus_lowest_eigenvalue(AnnulusSpec(r_in=1.0, r_out=3.0))


def test_monotone_in_curvature():
    kappas = np.linspace(0.05, 0.95, 20)
    values = np.array([annulus_lowest_eigenvalue(AnnulusSpec.about_circle(k, 1.0)) for k in kappas])
    assert np.all(np.diff(values) <= 1e-12)
    assert np.all(values >= disk_lowest_eigenvalue(2.0))


# ----- agreement with the transverse solver -----

@pytest.mark.parametrize("kappa", [0.2, 0.5, 0.8])
def test_transverse_matches_annulus(kappa):
    result = lambda1(CurvaturePair(kappa1=kappa, kappa2=0.0), 1.0, SolverOptions(n=2000))
    expected = annulus_lowest_eigenvalue(AnnulusSpec.about_circle(kappa, 1.0))
    assert result.lambda1 == pytest.approx(expected, rel=1e-6)


def test_transverse_disk_endpoint():
    result = lambda1(CurvaturePair(kappa1=1.0, kappa2=0.0), 1.0, SolverOptions(n=8000))
    assert result.free_endpoints == (False, True)
    assert result.lambda1 == pytest.approx(disk_lowest_eigenvalue(2.0), rel=1e-4)


# ----- cut-off profile quotient -----

def test_closed_form_decreases():
    values = [psi_epsilon_quotient_closed_form(eps, 1.0) for eps in (1e-2, 1e-3, 1e-4, 1e-6)]
    assert all(b < a for a, b in zip(values, values[1:]))
    assert values[1] == pytest.approx(0.579, abs=1e-3)


def test_closed_form_leading_order():
    eps = 1e-6
    leading = 4.0 / np.log(1.0 / eps)
    assert psi_epsilon_quotient_closed_form(eps, 1.0) == pytest.approx(leading, rel=0.2)
    assert psi_epsilon_quotient_closed_form(eps, 2.0) == pytest.approx(leading / 4, rel=0.2)


@pytest.mark.parametrize("eps,a", [(0.0, 1.0), (1.0, 2.0), (0.6, 0.5), (-1e-3, 1.0)])
def test_closed_form_out_of_range(eps, a):
    with pytest.raises(InputError):
        psi_epsilon_quotient_closed_form(eps, a)
