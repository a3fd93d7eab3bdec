"""
Data models for the layer lower bound and the inequality checks using Pydantic.
"""

from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from geometry.types import LayerHypothesisDiagnostic
from transverse.types import CurvaturePair, EigenResult

Branch = Literal["k1_plus,k2_minus", "k1_minus,k2_plus"]


class BranchSolve(BaseModel):
    """lambda1 at one corner of the curvature box, without the eigenvector."""

    pair: CurvaturePair
    lambda1: float
    error_estimate: float
    convergence: str
    extrapolated: bool

    @classmethod
    def from_result(cls, pair: CurvaturePair, result: EigenResult) -> "BranchSolve":
        return cls(
            pair=pair,
            lambda1=result.lambda1,
            error_estimate=result.error_estimate,
            convergence=result.convergence,
            extrapolated=result.extrapolated,
        )


class BoundReport(BaseModel):
    """min{lambda1(k1_plus, k2_minus), lambda1(k1_minus, k2_plus)} with its provenance."""

    surface: str = ""
    a: float
    lower_bound: float = Field(..., description="Lower bound of the layer's spectral threshold (1/length^2)")
    branch: Branch = Field(..., description="Corner of the curvature box attaining the minimum")
    lambda_branch_values: Tuple[float, float]
    branches: List[BranchSolve]
    floor: Optional[float] = Field(None, description="j01^2/(2a)^2, present when k1_minus >= 0 or k2_plus <= 0")
    hypothesis: LayerHypothesisDiagnostic
    solver_error: float = Field(..., description="Largest error estimate of the two branch solves")

    @model_validator(mode='after')
    def validate_minimum(self):
        if self.lower_bound != min(self.lambda_branch_values):
            raise ValueError("lower_bound must be the smaller branch value")
        return self


class ReductionCheck(BaseModel):
    """lambda1(k1, k2) >= min{lambda1(k1, 0), lambda1(0, k2)} for curvatures of equal sign."""

    pair: CurvaturePair
    a: float
    value: float
    first_only: float = Field(..., description="lambda1(k1, 0)")
    second_only: float = Field(..., description="lambda1(0, k2)")
    tolerance: float
    holds: bool


class PointwiseProfile(BaseModel):
    """Minimum over the sampled surface points of lambda1(k1(x), k2(x))."""

    surface: str
    a: float
    minimum: float
    location: Tuple[float, float] = Field(..., description="Chart point (p, q) of the minimum")
    pair: CurvaturePair = Field(..., description="Principal curvatures at the minimum")
    distinct_pairs: int = Field(..., description="Number of distinct curvature pairs solved")
    error_estimate: float


class HardyResidual(BaseModel):
    """Both sides of int |phi'|^2 >= lambda1 int |phi|^2 + int |V| |phi|^2 for one test function."""

    pair: CurvaturePair
    a: float
    energy: float = Field(..., description="int |phi'|^2")
    lambda1: float
    lambda1_source: Literal["solver", "limit"]
    mass: float = Field(..., description="int |phi|^2")
    potential_term: float = Field(..., description="int |V| |phi|^2")
    residual: float = Field(..., description="energy - lambda1 * mass - potential_term")
    quadrature_error: float
    tolerance: float
    refined: bool = False

    @property
    def holds(self) -> bool:
        return self.residual >= -self.tolerance
