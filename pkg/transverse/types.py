"""
Data models for the one-dimensional transverse eigenvalue problem using Pydantic.
"""

from typing import Callable, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, PositiveFloat, field_validator, model_validator

from .errors import InputError

# A half-width a > 0; the layer cross-section is (-a, a).
HalfWidth = PositiveFloat

# Relative slack when comparing |kappa * a| with 1.
ENDPOINT_SLACK = 1e-12

# The potential form is only trusted strictly inside this box.
POTENTIAL_BOX = 0.99


def require_half_width(a: float) -> float:
    """Return a as float, raising InputError unless a > 0."""
    if not np.isfinite(a) or a <= 0:
        raise InputError(f"Half-width must be positive, got {a}")
    return float(a)


class CurvaturePair(BaseModel):
    """Constant curvatures (kappa1, kappa2) of the transverse weight (1 - kappa1 u)(1 - kappa2 u)."""

    kappa1: float = Field(..., description="First curvature (1/length)")
    kappa2: float = Field(..., description="Second curvature (1/length)")

    def scaled(self, a: float) -> Tuple[float, float]:
        """Dimensionless curvatures (kappa1 a, kappa2 a)."""
        return self.kappa1 * a, self.kappa2 * a

    def is_admissible(self, a: float) -> bool:
        """True when both |kappa_i a| <= 1 (endpoints allowed)."""
        return all(abs(s) <= 1.0 + ENDPOINT_SLACK for s in self.scaled(a))

    def require_admissible(self, a: float) -> None:
        if not self.is_admissible(a):
            raise InputError(
                f"Curvatures ({self.kappa1}, {self.kappa2}) outside [-1/a, 1/a] for a={a}"
            )

    def degenerate_endpoints(self, a: float) -> Tuple[bool, bool]:
        """
        Which endpoints (-a, a) carry a vanishing weight.

        The factor 1 - kappa u vanishes at u = -a when kappa a = -1 and at
        u = a when kappa a = 1.
        """
        scaled = self.scaled(a)
        left = any(abs(s + 1.0) <= ENDPOINT_SLACK for s in scaled)
        right = any(abs(s - 1.0) <= ENDPOINT_SLACK for s in scaled)
        return left, right

    def inside_potential_box(self, a: float) -> bool:
        return all(abs(s) <= POTENTIAL_BOX + ENDPOINT_SLACK for s in self.scaled(a))

    def swapped(self) -> "CurvaturePair":
        return CurvaturePair(kappa1=self.kappa2, kappa2=self.kappa1)

    def reflected(self) -> "CurvaturePair":
        """The pair seen after the substitution u -> -u."""
        return CurvaturePair(kappa1=-self.kappa1, kappa2=-self.kappa2)


class GridSpec(BaseModel):
    """Uniform partition of [-a, a] with n interior nodes and spacing h = 2a/(n+1)."""

    n: int = Field(..., description="Number of interior nodes")
    a: HalfWidth = Field(..., description="Half-width of the interval")

    @field_validator('n')
    def validate_n(cls, v):
        if v < 3:
            raise ValueError(f"Grid too coarse: n={v}, need n >= 3")
        return v

    @property
    def h(self) -> float:
        return 2.0 * self.a / (self.n + 1)

    def nodes(self) -> np.ndarray:
        """All n+2 nodes, endpoints exactly -a and a."""
        return np.linspace(-self.a, self.a, self.n + 2)

    def refined(self) -> "GridSpec":
        """The grid with half the spacing (2n+1 interior nodes)."""
        return GridSpec(n=2 * self.n + 1, a=self.a)


class TestFunction(BaseModel):
    """Samples of a Dirichlet test function, piecewise linear between its nodes."""

    __test__ = False  # not a pytest class

    nodes: List[float] = Field(..., description="Strictly increasing nodes from -a to a")
    samples: List[float] = Field(..., description="Values at the nodes, zero at both endpoints")

    @model_validator(mode='after')
    def validate_dirichlet_samples(self):
        if len(self.nodes) != len(self.samples):
            raise ValueError(f"{len(self.nodes)} nodes but {len(self.samples)} samples")
        if len(self.nodes) < 3:
            raise ValueError("A test function needs at least one interior node")
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("Nodes must be strictly increasing")
        if self.samples[0] != 0.0 or self.samples[-1] != 0.0:
            raise ValueError("Endpoint samples must be exactly 0")
        return self

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray], np.ndarray], nodes: np.ndarray) -> "TestFunction":
        """
        Sample func at the nodes and pin the endpoint samples to 0.

        Raises InputError if func is visibly nonzero at an endpoint.
        """
        nodes = np.asarray(nodes, dtype=float)
        values = np.asarray(func(nodes), dtype=float)
        scale = max(float(np.max(np.abs(values))), 1.0)
        if abs(values[0]) > 1e-9 * scale or abs(values[-1]) > 1e-9 * scale:
            raise InputError("Test function does not vanish at the endpoints")
        values[0] = 0.0
        values[-1] = 0.0
        return cls(nodes=nodes.tolist(), samples=values.tolist())

    @property
    def a(self) -> float:
        return self.nodes[-1]


class SolverOptions(BaseModel):
    """Knobs for the lambda1 dispatcher."""

    n: int = Field(2000, ge=3, description="Interior nodes of the coarse grid")
    extrapolate: bool = Field(True, description="Richardson-extrapolate n and 2n+1")
    cross_check: bool = Field(True, description="Compare with the potential form inside the 0.99/a box")
    endpoint_condition: Literal["auto", "dirichlet"] = Field(
        "auto", description="'auto' frees a single degenerate endpoint; 'dirichlet' never does"
    )
    tol: float = Field(1e-13, gt=0, description="Relative eigenvalue change that stops inverse iteration")
    max_iter: int = Field(10_000, ge=1, description="Inverse iteration cap")


class CrossCheck(BaseModel):
    """Outcome of comparing the weighted and potential solvers."""

    potential_lambda1: float
    potential_error: float
    discrepancy: float
    tolerance: float


class EigenResult(BaseModel):
    """Lowest eigenvalue estimate with its eigenvector samples."""

    lambda1: float = Field(..., description="Eigenvalue estimate (1/length^2)")
    eigenvector: List[float] = Field(..., description="Samples at the unknown nodes, unit discrete weighted norm")
    nodes: List[float] = Field(..., description="Positions of the eigenvector samples")
    method: Literal["weighted-FE", "potential-FD"]
    n: int = Field(..., description="Interior nodes of the grid that produced the eigenvector")
    error_estimate: float = Field(..., description="Extrapolation increment, or eigensolver change for raw solves")
    extrapolated: bool = False
    convergence: Literal["single-grid", "richardson", "raw-decreasing", "raw-nonmonotone"] = "single-grid"
    iterations: int = 0
    free_endpoints: Tuple[bool, bool] = (False, False)
    raw_values: List[Tuple[int, float]] = Field(default_factory=list, description="(n, lambda) per grid solved")
    cross_check: Optional[CrossCheck] = None

    @model_validator(mode='after')
    def validate_sign_convention(self):
        if len(self.eigenvector) != len(self.nodes):
            raise ValueError("Eigenvector and nodes differ in length")
        for value in self.eigenvector:
            if value != 0.0:
                if value < 0.0:
                    raise ValueError("First nonzero eigenvector entry must be positive")
                break
        return self

    @property
    def converged(self) -> bool:
        return self.convergence in ("single-grid", "richardson")

    def to_test_function(self, a: float) -> TestFunction:
        """The eigenvector extended by its Dirichlet zeros."""
        if any(self.free_endpoints):
            raise InputError("Eigenvector has a free endpoint, it is not a Dirichlet test function")
        nodes = [-a] + list(self.nodes) + [a]
        samples = [0.0] + list(self.eigenvector) + [0.0]
        return TestFunction(nodes=nodes, samples=samples)
