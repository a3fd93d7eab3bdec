"""
Fundamental forms, principal curvatures and sampled curvature extrema of parametric surfaces.
"""

import logging
from typing import NamedTuple, Tuple, Union

import numpy as np

from .errors import ChartError, CurvatureConsistencyError, ImmersionError
from .types import (
    CurvatureSummary,
    FundamentalForms,
    LayerHypothesisDiagnostic,
    ParametricSurface,
    PrincipalCurvaturePair,
)

logger = logging.getLogger(__name__)

# H^2 - K in [-RADICAND_GUARD * scale, 0) is rounding and is clamped to 0.
RADICAND_GUARD = 1e-12

MIN_RESOLUTION = 16

INJECTIVITY_ASSUMPTION = "tube map (x, u) -> x + u n(x) assumed injective, not checked"
PATCH_ASSUMPTION = "curvature extrema taken over the sampled chart patch only"


class FormArrays(NamedTuple):
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    L: np.ndarray
    M: np.ndarray
    N: np.ndarray


class CurvatureSamples(NamedTuple):
    p: np.ndarray
    q: np.ndarray
    k1: np.ndarray
    k2: np.ndarray
    gauss: np.ndarray
    mean: np.ndarray


def _forms(surface: ParametricSurface, p: np.ndarray, q: np.ndarray) -> FormArrays:
    """Vectorised fundamental forms; raises ImmersionError at the first degenerate point."""
    r_p, r_q = surface.partials(p, q)
    r_pp, r_pq, r_qq = surface.second_order_partials(p, q)
    E = np.sum(r_p * r_p, axis=0)
    F = np.sum(r_p * r_q, axis=0)
    G = np.sum(r_q * r_q, axis=0)

    det = E * G - F * F
    bad = ~(det > 0)
    if np.any(bad):
        index = np.unravel_index(np.argmax(bad), np.shape(det))
        point = (float(np.asarray(p)[index]), float(np.asarray(q)[index]))
        raise ImmersionError(f"Chart of {surface.name} is not an immersion at (p, q) = {point}", point=point)

    cross = np.cross(r_p, r_q, axis=0)
    normal = surface.orientation * cross / np.sqrt(det)
    return FormArrays(
        E=E, F=F, G=G,
        L=np.sum(r_pp * normal, axis=0),
        M=np.sum(r_pq * normal, axis=0),
        N=np.sum(r_qq * normal, axis=0),
    )


def fundamental_forms_at(surface: ParametricSurface, p: float, q: float) -> FundamentalForms:
    """E, F, G from the first partials and L, M, N against the oriented unit normal."""
    surface.require_in_domain(p, q)
    forms = _forms(surface, np.asarray(float(p)), np.asarray(float(q)))
    return FundamentalForms(**{k: float(v) for k, v in forms._asdict().items()})


def _principal(forms: FormArrays) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    det = forms.E * forms.G - forms.F ** 2
    mean = (forms.E * forms.N - 2 * forms.F * forms.M + forms.G * forms.L) / (2 * det)
    gauss = (forms.L * forms.N - forms.M ** 2) / det
    radicand = mean * mean - gauss
    scale = np.maximum(1.0, np.maximum(mean * mean, np.abs(gauss)))
    if np.any(radicand < -RADICAND_GUARD * scale):
        worst = float(np.min(radicand / scale))
        raise CurvatureConsistencyError(f"H^2 - K = {worst:.3e} (relative) is negative beyond rounding")
    root = np.sqrt(np.maximum(radicand, 0.0))
    return mean - root, mean + root, gauss, mean


def principal_curvatures_at(forms: FundamentalForms) -> PrincipalCurvaturePair:
    """(H - sqrt(H^2 - K), H + sqrt(H^2 - K)) with the radicand clamped at rounding level."""
    arrays = FormArrays(*(np.asarray(getattr(forms, k)) for k in FormArrays._fields))
    k1, k2, gauss, mean = _principal(arrays)
    return PrincipalCurvaturePair(k1=float(k1), k2=float(k2), gauss=float(gauss), mean=float(mean))


def _axis_samples(bounds: Tuple[float, float], periodic: bool, count: int) -> np.ndarray:
    """Periodic axes at lo + i*span/count, others at cell centres."""
    lo, hi = bounds
    step = (hi - lo) / count
    offset = 0.0 if periodic else 0.5
    return lo + (np.arange(count) + offset) * step


def _resolution(resolution: Union[int, Tuple[int, int]]) -> Tuple[int, int]:
    res = (resolution, resolution) if isinstance(resolution, (int, np.integer)) else tuple(resolution)
    if len(res) != 2 or min(res) < MIN_RESOLUTION:
        raise ChartError(f"Resolution must be at least {MIN_RESOLUTION} per axis, got {resolution}")
    return int(res[0]), int(res[1])


def curvature_samples(surface: ParametricSurface, resolution: Union[int, Tuple[int, int]]) -> CurvatureSamples:
    """Sorted principal curvatures, K and H on the sampling grid."""
    res = _resolution(resolution)
    if not surface.has_analytic_partials:
        logger.warning("Surface %s has no analytic partials; using central differences", surface.name)
    p = _axis_samples(surface.p_range, surface.periodic[0], res[0])
    q = _axis_samples(surface.q_range, surface.periodic[1], res[1])
    P, Q = np.meshgrid(p, q, indexing="ij")
    k1, k2, gauss, mean = _principal(_forms(surface, P, Q))
    return CurvatureSamples(p=P, q=Q, k1=k1, k2=k2, gauss=gauss, mean=mean)


def curvature_summary(surface: ParametricSurface, resolution: Union[int, Tuple[int, int]]) -> CurvatureSummary:
    """
    Extrema of k1 <= k2 over the sampling grid.

    Deterministic for a fixed resolution; the grid includes the seam of every
    periodic axis.
    """
    samples = curvature_samples(surface, resolution)
    res = samples.p.shape

    def located(field: np.ndarray, pick) -> Tuple[float, Tuple[float, float]]:
        index = np.unravel_index(pick(field), field.shape)
        return float(field[index]), (float(samples.p[index]), float(samples.q[index]))

    extrema = {
        "k1_plus": located(samples.k1, np.argmax),
        "k1_minus": located(samples.k1, np.argmin),
        "k2_plus": located(samples.k2, np.argmax),
        "k2_minus": located(samples.k2, np.argmin),
    }
    values = {name: value for name, (value, _) in extrema.items()}
    summary = CurvatureSummary(
        surface=surface.name,
        max_abs=max(abs(v) for v in values.values()),
        sample_resolution=(int(res[0]), int(res[1])),
        gauss_range=(float(samples.gauss.min()), float(samples.gauss.max())),
        mean_range=(float(samples.mean.min()), float(samples.mean.max())),
        locations={name: where for name, (_, where) in extrema.items()},
        sampled_patch_only=surface.sampled_patch,
        **values,
    )
    logger.debug("Curvature summary of %s at %s: %s", surface.name, res, values)
    return summary


def check_layer_hypothesis(summary: CurvatureSummary, a: float) -> LayerHypothesisDiagnostic:
    """a * max|k_i| < 1, strictly. Never raises."""
    a = float(a)
    product = a * summary.max_abs
    passed = bool(np.isfinite(product) and a > 0 and product < 1.0)
    assumptions = [INJECTIVITY_ASSUMPTION]
    if summary.sampled_patch_only:
        assumptions.append(PATCH_ASSUMPTION)
    return LayerHypothesisDiagnostic(
        passed=passed,
        a=a,
        max_abs=summary.max_abs,
        product=product,
        margin=1.0 - product,
        assumptions=assumptions,
    )
