"""
Data models for reference surfaces and their curvature using Pydantic.
"""

from typing import Callable, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import ChartError

# Vector-valued maps take (p, q) arrays and return arrays of shape (3, *p.shape).
Chart = Callable[[np.ndarray, np.ndarray], np.ndarray]
FirstPartials = Callable[[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray]]
SecondPartials = Callable[[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray, np.ndarray]]

# Central-difference step as a fraction of the axis span.
FD_STEP = 1e-5


def _broadcast(vector: np.ndarray, like: np.ndarray) -> np.ndarray:
    return np.reshape(vector, (3,) + (1,) * (np.ndim(like) - 1))


def _rotate(rotation: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.einsum("ij,j...->i...", rotation, v)


class ParametricSurface(BaseModel):
    """
    A chart (p, q) -> R^3 over a rectangle with optional periodic axes.

    Partials come from the analytic callables when given, otherwise from
    central differences with step FD_STEP times the axis span.
    orientation = -1 reverses the unit normal.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str = Field(..., description="Catalog name or chart file path")
    parameters: Dict[str, float] = Field(default_factory=dict)
    chart: Chart
    p_range: Tuple[float, float]
    q_range: Tuple[float, float]
    periodic: Tuple[bool, bool] = (False, False)
    first_partials: Optional[FirstPartials] = None
    second_partials: Optional[SecondPartials] = None
    orientation: Literal[1, -1] = 1
    sampled_patch: bool = Field(False, description="Chart covers a finite patch, not a complete surface")

    @model_validator(mode='after')
    def validate_domain(self):
        for label, (lo, hi) in (("p", self.p_range), ("q", self.q_range)):
            if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
                raise ValueError(f"Empty or unbounded {label} range ({lo}, {hi})")
        return self

    @property
    def spans(self) -> Tuple[float, float]:
        return self.p_range[1] - self.p_range[0], self.q_range[1] - self.q_range[0]

    @property
    def has_analytic_partials(self) -> bool:
        return self.first_partials is not None and self.second_partials is not None

    def fd_steps(self) -> Tuple[float, float]:
        return self.spans[0] * FD_STEP, self.spans[1] * FD_STEP

    def require_in_domain(self, p: np.ndarray, q: np.ndarray) -> None:
        for label, values, (lo, hi), periodic in (
            ("p", p, self.p_range, self.periodic[0]),
            ("q", q, self.q_range, self.periodic[1]),
        ):
            if periodic:
                continue
            slack = 1e-12 * (hi - lo)
            if np.any(np.asarray(values) < lo - slack) or np.any(np.asarray(values) > hi + slack):
                raise ChartError(f"{label} outside [{lo}, {hi}] on surface {self.name}")

    def point(self, p, q) -> np.ndarray:
        return np.asarray(self.chart(np.asarray(p, dtype=float), np.asarray(q, dtype=float)), dtype=float)

    def partials(self, p, q) -> Tuple[np.ndarray, np.ndarray]:
        """(r_p, r_q)"""
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        if self.first_partials is not None:
            return self.first_partials(p, q)
        hp, hq = self.fd_steps()
        r_p = (self.chart(p + hp, q) - self.chart(p - hp, q)) / (2 * hp)
        r_q = (self.chart(p, q + hq) - self.chart(p, q - hq)) / (2 * hq)
        return r_p, r_q

    def second_order_partials(self, p, q) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(r_pp, r_pq, r_qq)"""
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        if self.second_partials is not None:
            return self.second_partials(p, q)
        hp, hq = self.fd_steps()
        center = self.chart(p, q)
        r_pp = (self.chart(p + hp, q) - 2 * center + self.chart(p - hp, q)) / (hp * hp)
        r_qq = (self.chart(p, q + hq) - 2 * center + self.chart(p, q - hq)) / (hq * hq)
        r_pq = (
            self.chart(p + hp, q + hq) - self.chart(p + hp, q - hq)
            - self.chart(p - hp, q + hq) + self.chart(p - hp, q - hq)
        ) / (4 * hp * hq)
        return r_pp, r_pq, r_qq

    def flipped(self) -> "ParametricSurface":
        """The same surface with the opposite unit normal."""
        return self.model_copy(update={"orientation": -self.orientation})

    def moved(self, rotation, shift) -> "ParametricSurface":
        """The surface after x -> rotation @ x + shift; rotation must be proper orthogonal."""
        rotation = np.asarray(rotation, dtype=float)
        shift = np.asarray(shift, dtype=float)
        if rotation.shape != (3, 3) or shift.shape != (3,):
            raise ChartError("Rigid motion needs a 3x3 rotation and a 3-vector shift")
        if not np.allclose(rotation @ rotation.T, np.eye(3), atol=1e-12) or np.linalg.det(rotation) < 0:
            raise ChartError("Rotation must be orthogonal with determinant +1")

        base = self

        def chart(p, q):
            r = base.chart(p, q)
            return _rotate(rotation, r) + _broadcast(shift, r)

        first = second = None
        if self.first_partials is not None:
            def first(p, q):
                return tuple(_rotate(rotation, v) for v in base.first_partials(p, q))
        if self.second_partials is not None:
            def second(p, q):
                return tuple(_rotate(rotation, v) for v in base.second_partials(p, q))

        return self.model_copy(update={"chart": chart, "first_partials": first, "second_partials": second})


class FundamentalForms(BaseModel):
    """First (E, F, G) and second (L, M, N) fundamental form coefficients at one chart point."""

    E: float
    F: float
    G: float
    L: float
    M: float
    N: float

    @model_validator(mode='after')
    def validate_metric(self):
        if not self.E * self.G - self.F ** 2 > 0:
            raise ValueError(f"First fundamental form is degenerate: EG - F^2 = {self.E * self.G - self.F ** 2}")
        return self

    @property
    def metric_determinant(self) -> float:
        return self.E * self.G - self.F ** 2


class PrincipalCurvaturePair(BaseModel):
    """Sorted principal curvatures with the Gauss and mean curvature they were computed from."""

    k1: float = Field(..., description="Smaller principal curvature (1/length)")
    k2: float = Field(..., description="Larger principal curvature (1/length)")
    gauss: float = Field(..., description="K = (LN - M^2)/(EG - F^2)")
    mean: float = Field(..., description="H = (EN - 2FM + GL)/(2(EG - F^2))")

    @model_validator(mode='after')
    def validate_sorted(self):
        if self.k1 > self.k2:
            raise ValueError(f"Principal curvatures must be sorted, got k1={self.k1} > k2={self.k2}")
        return self


class CurvatureSummary(BaseModel):
    """Sampled extrema of the sorted principal curvature fields."""

    surface: str = ""
    k1_plus: float = Field(..., description="sup k1")
    k1_minus: float = Field(..., description="inf k1")
    k2_plus: float = Field(..., description="sup k2")
    k2_minus: float = Field(..., description="inf k2")
    max_abs: float = Field(..., description="max |k_i| over the samples")
    sample_resolution: Tuple[int, int]
    gauss_range: Tuple[float, float] = (0.0, 0.0)
    mean_range: Tuple[float, float] = (0.0, 0.0)
    locations: Dict[str, Tuple[float, float]] = Field(
        default_factory=dict, description="Chart point (p, q) where each principal-curvature extremum was sampled"
    )
    sampled_patch_only: bool = False

    @model_validator(mode='after')
    def validate_ordering(self):
        slack = 1e-12 * max(1.0, abs(self.max_abs))
        if self.k1_minus > self.k1_plus or self.k2_minus > self.k2_plus:
            raise ValueError("Extrema out of order: minus above plus")
        if self.k1_plus > self.k2_plus + slack:
            raise ValueError("Sorted convention violated: k1_plus > k2_plus")
        expected = max(abs(self.k1_minus), abs(self.k1_plus), abs(self.k2_minus), abs(self.k2_plus))
        if abs(self.max_abs - expected) > slack:
            raise ValueError(f"max_abs={self.max_abs} does not match the extrema ({expected})")
        return self

    def flipped(self) -> "CurvatureSummary":
        """The summary seen with the opposite normal: k1' = -k2 and k2' = -k1 pointwise."""
        swap = {"k1_plus": "k2_minus", "k1_minus": "k2_plus", "k2_plus": "k1_minus", "k2_minus": "k1_plus"}
        return self.model_copy(update={
            "k1_plus": -self.k2_minus,
            "k1_minus": -self.k2_plus,
            "k2_plus": -self.k1_minus,
            "k2_minus": -self.k1_plus,
            "mean_range": (-self.mean_range[1], -self.mean_range[0]),
            "locations": {swap[k]: v for k, v in self.locations.items() if k in swap},
        })


class LayerHypothesisDiagnostic(BaseModel):
    """Outcome of the a * max|k_i| < 1 check."""

    passed: bool
    a: float
    max_abs: float
    product: float = Field(..., description="a * max_abs")
    margin: float = Field(..., description="1 - a * max_abs")
    assumptions: List[str] = Field(default_factory=list, description="Hypotheses recorded but not checked")

