"""
Built-in reference surfaces and the loader for sampled charts.

Every built-in chart is oriented so that its convex side has positive curvature
(the unit normal points into the sphere, cylinder and torus tube).
"""

import logging
from pathlib import Path
from typing import Callable, Dict, Tuple, Union

import numpy as np
from scipy.interpolate import RectBivariateSpline

from .errors import ChartError
from .types import ParametricSurface

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi

# Seam of a periodic axis: a repeated sample within this (relative to the chart size)
# is a duplicate; otherwise the wrap-around gap must lie in this range of neighbour steps.
SEAM_DUPLICATE_TOL = 1e-9
SEAM_GAP_RANGE = (0.5, 2.0)


def _positive(name: str, value: float) -> float:
    if not np.isfinite(value) or value <= 0:
        raise ChartError(f"Surface parameter {name} must be positive, got {value}")
    return float(value)


def plane() -> ParametricSurface:
    """z = 0 over [-1, 1]^2."""
    def chart(p, q):
        return np.stack([p, q, np.zeros_like(p)])

    def first(p, q):
        zero, one = np.zeros_like(p), np.ones_like(p)
        return np.stack([one, zero, zero]), np.stack([zero, one, zero])

    def second(p, q):
        zero = np.zeros((3,) + np.shape(p))
        return zero, zero, zero

    return ParametricSurface(
        name="plane", chart=chart, p_range=(-1.0, 1.0), q_range=(-1.0, 1.0),
        first_partials=first, second_partials=second,
    )


def sphere(R: float) -> ParametricSurface:
    """(p, q) = (azimuth, polar angle); both curvatures 1/R."""
    R = _positive("R", R)

    def chart(p, q):
        return R * np.stack([np.sin(q) * np.cos(p), np.sin(q) * np.sin(p), np.cos(q)])

    def first(p, q):
        zero = np.zeros_like(p)
        r_p = R * np.stack([-np.sin(q) * np.sin(p), np.sin(q) * np.cos(p), zero])
        r_q = R * np.stack([np.cos(q) * np.cos(p), np.cos(q) * np.sin(p), -np.sin(q)])
        return r_p, r_q

    def second(p, q):
        zero = np.zeros_like(p)
        r_pp = R * np.stack([-np.sin(q) * np.cos(p), -np.sin(q) * np.sin(p), zero])
        r_pq = R * np.stack([-np.cos(q) * np.sin(p), np.cos(q) * np.cos(p), zero])
        r_qq = R * np.stack([-np.sin(q) * np.cos(p), -np.sin(q) * np.sin(p), -np.cos(q)])
        return r_pp, r_pq, r_qq

    return ParametricSurface(
        name="sphere", parameters={"R": R}, chart=chart,
        p_range=(0.0, TWO_PI), q_range=(0.0, np.pi), periodic=(True, False),
        first_partials=first, second_partials=second,
    )


def cylinder(R: float) -> ParametricSurface:
    """(p, q) = (height in [-1, 1], angle); curvatures 0 and 1/R."""
    R = _positive("R", R)

    def chart(p, q):
        return np.stack([R * np.cos(q), R * np.sin(q), p])

    def first(p, q):
        zero, one = np.zeros_like(p), np.ones_like(p)
        return np.stack([zero, zero, one]), np.stack([-R * np.sin(q), R * np.cos(q), zero])

    def second(p, q):
        zero = np.zeros((3,) + np.shape(p))
        r_qq = np.stack([-R * np.cos(q), -R * np.sin(q), np.zeros_like(p)])
        return zero, zero, r_qq

    return ParametricSurface(
        name="cylinder", parameters={"R": R}, chart=chart,
        p_range=(-1.0, 1.0), q_range=(0.0, TWO_PI), periodic=(False, True),
        first_partials=first, second_partials=second,
    )


def torus(R: float, r: float) -> ParametricSurface:
    """(p, q) = (tube angle, revolution angle); curvatures cos p/(R + r cos p) and 1/r."""
    R = _positive("R", R)
    r = _positive("r", r)
    if r >= R:
        raise ChartError(f"Torus needs r < R, got R={R}, r={r}")

    def chart(p, q):
        rho = R + r * np.cos(p)
        return np.stack([rho * np.cos(q), rho * np.sin(q), r * np.sin(p)])

    def first(p, q):
        rho = R + r * np.cos(p)
        r_p = np.stack([-r * np.sin(p) * np.cos(q), -r * np.sin(p) * np.sin(q), r * np.cos(p)])
        r_q = np.stack([-rho * np.sin(q), rho * np.cos(q), np.zeros_like(p)])
        return r_p, r_q

    def second(p, q):
        rho = R + r * np.cos(p)
        zero = np.zeros_like(p)
        r_pp = np.stack([-r * np.cos(p) * np.cos(q), -r * np.cos(p) * np.sin(q), -r * np.sin(p)])
        r_pq = np.stack([r * np.sin(p) * np.sin(q), -r * np.sin(p) * np.cos(q), zero])
        r_qq = np.stack([-rho * np.cos(q), -rho * np.sin(q), zero])
        return r_pp, r_pq, r_qq

    return ParametricSurface(
        name="torus", parameters={"R": R, "r": r}, chart=chart,
        p_range=(0.0, TWO_PI), q_range=(0.0, TWO_PI), periodic=(True, True),
        first_partials=first, second_partials=second,
    )


def catenoid(c: float) -> ParametricSurface:
    """(p, q) = (height in [-3c, 3c], angle); curvatures -+1/(c cosh^2(p/c))."""
    c = _positive("c", c)

    def chart(p, q):
        radius = c * np.cosh(p / c)
        return np.stack([radius * np.cos(q), radius * np.sin(q), p])

    def first(p, q):
        s, ch = np.sinh(p / c), np.cosh(p / c)
        r_p = np.stack([s * np.cos(q), s * np.sin(q), np.ones_like(p)])
        r_q = np.stack([-c * ch * np.sin(q), c * ch * np.cos(q), np.zeros_like(p)])
        return r_p, r_q

    def second(p, q):
        s, ch = np.sinh(p / c), np.cosh(p / c)
        zero = np.zeros_like(p)
        r_pp = np.stack([ch * np.cos(q) / c, ch * np.sin(q) / c, zero])
        r_pq = np.stack([-s * np.sin(q), s * np.cos(q), zero])
        r_qq = np.stack([-c * ch * np.cos(q), -c * ch * np.sin(q), zero])
        return r_pp, r_pq, r_qq

    return ParametricSurface(
        name="catenoid", parameters={"c": c}, chart=chart,
        p_range=(-3.0 * c, 3.0 * c), q_range=(0.0, TWO_PI), periodic=(False, True),
        first_partials=first, second_partials=second, sampled_patch=True,
    )


def paraboloid(c: float) -> ParametricSurface:
    """z = c (x^2 + y^2) over [-1, 1]^2; both curvatures 2c at the vertex."""
    c = _positive("c", c)

    def chart(p, q):
        return np.stack([p, q, c * (p * p + q * q)])

    def first(p, q):
        zero, one = np.zeros_like(p), np.ones_like(p)
        return np.stack([one, zero, 2 * c * p]), np.stack([zero, one, 2 * c * q])

    def second(p, q):
        zero = np.zeros_like(p)
        bend = np.stack([zero, zero, np.full_like(p, 2 * c)])
        return bend, np.zeros((3,) + np.shape(p)), bend

    return ParametricSurface(
        name="paraboloid", parameters={"c": c}, chart=chart,
        p_range=(-1.0, 1.0), q_range=(-1.0, 1.0),
        first_partials=first, second_partials=second, sampled_patch=True,
    )


CATALOG: Dict[str, Callable[..., ParametricSurface]] = {
    "plane": plane,
    "sphere": sphere,
    "cylinder": cylinder,
    "torus": torus,
    "catenoid": catenoid,
    "paraboloid": paraboloid,
}


def build_surface(name: str, parameters: Dict[str, float] = None) -> ParametricSurface:
    """Catalog surface by name, e.g. build_surface("torus", {"R": 2, "r": 0.5})."""
    if name not in CATALOG:
        raise ChartError(f"Unknown surface '{name}', expected one of {sorted(CATALOG)}")
    try:
        return CATALOG[name](**(parameters or {}))
    except TypeError as e:
        raise ChartError(f"Bad parameters {parameters} for surface '{name}': {e}") from e


def _parse_flag(token: str) -> bool:
    lowered = token.strip().lower()
    if lowered in ("1", "true", "yes"):
        return True
    if lowered in ("0", "false", "no"):
        return False
    raise ChartError(f"Periodicity flag must be 0/1 or true/false, got '{token}'")


def _padded_axis(values: np.ndarray, periodic: bool, pad: int) -> Tuple[np.ndarray, float]:
    """Axis values extended by `pad` wrapped samples on each side when periodic, and the period."""
    if not periodic:
        return values, 0.0
    steps = np.diff(values)
    if not np.allclose(steps, steps[0], rtol=1e-9):
        raise ChartError("Periodic axes must be sampled uniformly")
    period = steps[0] * values.size
    extended = np.concatenate([values[-pad:] - period, values, values[:pad] + period])
    return extended, period


def _close_seam(xyz: np.ndarray, axis_values: np.ndarray, axis: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Check the wrap-around of a periodic axis of the (p, q, 3) point grid.

    A last sample repeating the first (the closed linspace habit) is dropped.
    Otherwise the gap from the last sample back to the first must be about
    one neighbour step, or the chart does not close and is rejected.
    """
    first = np.take(xyz, 0, axis=axis)
    last = np.take(xyz, -1, axis=axis)
    gap = np.linalg.norm(last - first, axis=-1)
    scale = max(1.0, float(np.max(np.abs(xyz))))
    if np.all(gap <= SEAM_DUPLICATE_TOL * scale):
        logger.warning("Periodic axis %d repeats its first sample at the end; dropping the duplicate", axis)
        keep = range(xyz.shape[axis] - 1)
        return np.take(xyz, keep, axis=axis), axis_values[:-1]

    after = np.linalg.norm(np.take(xyz, 1, axis=axis) - first, axis=-1)
    before = np.linalg.norm(last - np.take(xyz, -2, axis=axis), axis=-1)
    steps = 0.5 * (after + before)
    moving = steps > SEAM_DUPLICATE_TOL * scale
    ratio = gap[moving] / steps[moving]
    if ratio.size and (np.any(ratio < SEAM_GAP_RANGE[0]) or np.any(ratio > SEAM_GAP_RANGE[1])):
        raise ChartError(
            f"Periodic axis {axis} does not close: wrap-around gap is {ratio.min():.3g} to {ratio.max():.3g} "
            f"neighbour steps, expected about 1"
        )
    return xyz, axis_values


def _wrap(grid: np.ndarray, axis: int, periodic: bool, pad: int) -> np.ndarray:
    if not periodic:
        return grid
    head = np.take(grid, range(grid.shape[axis] - pad, grid.shape[axis]), axis=axis)
    tail = np.take(grid, range(pad), axis=axis)
    return np.concatenate([head, grid, tail], axis=axis)


def load_sampled_chart(path: Union[str, Path]) -> ParametricSurface:
    """
    Read a sampled chart and interpolate it with bicubic splines.

    Format: header "p_count q_count periodic_p periodic_q", then one row
    "p q x y z" per grid point. Periodic axes are padded by wrap-around so
    the spline stays C2 across the seam; the spline derivatives serve as
    the chart partials.
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            header = f.readline().split()
            rows = np.loadtxt(f, ndmin=2)
    except OSError as e:
        raise ChartError(f"Cannot read chart file {path}: {e}") from e
    except ValueError as e:
        raise ChartError(f"Malformed chart rows in {path}: {e}") from e

    if len(header) != 4:
        raise ChartError(f"Chart header must be 'p_count q_count periodic_p periodic_q', got {header}")
    try:
        p_count, q_count = int(header[0]), int(header[1])
    except ValueError as e:
        raise ChartError(f"Chart counts must be integers, got {header[:2]}") from e
    periodic = (_parse_flag(header[2]), _parse_flag(header[3]))
    if p_count < 4 or q_count < 4:
        raise ChartError("Sampled charts need at least 4 samples per axis")
    if rows.shape != (p_count * q_count, 5):
        raise ChartError(f"Expected {p_count * q_count} rows of 'p q x y z', got shape {rows.shape}")

    order = np.lexsort((rows[:, 1], rows[:, 0]))
    rows = rows[order]
    p_axis = rows[::q_count, 0]
    q_axis = rows[:q_count, 1]
    if not np.allclose(rows[:, 0].reshape(p_count, q_count), p_axis[:, None]) or \
            not np.allclose(rows[:, 1].reshape(p_count, q_count), q_axis[None, :]):
        raise ChartError("Chart samples do not form a rectangular (p, q) grid")
    if np.any(np.diff(p_axis) <= 0) or np.any(np.diff(q_axis) <= 0):
        raise ChartError("Chart axes must be strictly increasing")

    xyz = rows[:, 2:].reshape(p_count, q_count, 3)
    if periodic[0]:
        xyz, p_axis = _close_seam(xyz, p_axis, 0)
    if periodic[1]:
        xyz, q_axis = _close_seam(xyz, q_axis, 1)
    if min(xyz.shape[:2]) < 4:
        raise ChartError("Sampled charts need at least 4 distinct samples per axis")

    pad = 3
    p_ext, p_period = _padded_axis(p_axis, periodic[0], pad)
    q_ext, q_period = _padded_axis(q_axis, periodic[1], pad)
    splines = []
    for column in range(3):
        values = xyz[:, :, column]
        values = _wrap(_wrap(values, 0, periodic[0], pad), 1, periodic[1], pad)
        splines.append(RectBivariateSpline(p_ext, q_ext, values, kx=3, ky=3, s=0))

    p_range = (float(p_axis[0]), float(p_axis[0] + p_period) if periodic[0] else float(p_axis[-1]))
    q_range = (float(q_axis[0]), float(q_axis[0] + q_period) if periodic[1] else float(q_axis[-1]))

    def reduce(p, q):
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        if periodic[0]:
            p = p_range[0] + np.mod(p - p_range[0], p_period)
        if periodic[1]:
            q = q_range[0] + np.mod(q - q_range[0], q_period)
        return p, q

    def evaluate(p, q, dx=0, dy=0):
        p, q = reduce(p, q)
        return np.stack([s.ev(p, q, dx=dx, dy=dy) for s in splines])

    def first(p, q):
        return evaluate(p, q, dx=1), evaluate(p, q, dy=1)

    def second(p, q):
        return evaluate(p, q, dx=2), evaluate(p, q, dx=1, dy=1), evaluate(p, q, dy=2)

    logger.info("Loaded sampled chart %s: %dx%d, periodic=%s", path, p_axis.size, q_axis.size, periodic)
    return ParametricSurface(
        name=str(path), chart=evaluate, p_range=p_range, q_range=q_range, periodic=periodic,
        first_partials=first, second_partials=second, sampled_patch=True,
    )


def write_sampled_chart(surface: ParametricSurface, path: Union[str, Path], counts: Tuple[int, int]) -> None:
    """Sample a surface into the plain-text chart format (periodic axes without the closing sample)."""
    axes = []
    for (lo, hi), periodic, count in zip((surface.p_range, surface.q_range), surface.periodic, counts):
        axes.append(lo + np.arange(count) * (hi - lo) / count if periodic else np.linspace(lo, hi, count))
    P, Q = np.meshgrid(axes[0], axes[1], indexing="ij")
    xyz = surface.point(P, Q)
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"{counts[0]} {counts[1]} {int(surface.periodic[0])} {int(surface.periodic[1])}\n")
        for i in range(counts[0]):
            for j in range(counts[1]):
                f.write(" ".join(format(v, ".17g") for v in (P[i, j], Q[i, j], *xyz[:, i, j])) + "\n")
