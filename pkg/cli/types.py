"""
Run configuration for the command-line front end using Pydantic.
"""

from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from geometry.surfaces import build_surface, load_sampled_chart
from geometry.types import ParametricSurface
from transverse.types import CurvaturePair, HalfWidth, SolverOptions


class SurfaceConfig(BaseModel):
    """A catalog surface by name, or a sampled chart file."""

    name: Optional[str] = Field(None, description="Catalog name: plane, sphere, cylinder, torus, catenoid, paraboloid")
    parameters: Dict[str, float] = Field(default_factory=dict)
    chart: Optional[str] = Field(None, description="Path to a sampled chart file")
    orientation: Literal[1, -1] = 1

    @model_validator(mode='after')
    def validate_source(self):
        if (self.name is None) == (self.chart is None):
            raise ValueError("Give exactly one of surface 'name' or 'chart'")
        return self

    def build(self) -> ParametricSurface:
        surface = build_surface(self.name, self.parameters) if self.chart is None else load_sampled_chart(self.chart)
        return surface if self.orientation == 1 else surface.flipped()


class SweepConfig(BaseModel):
    """Values start, ..., stop (inclusive, `steps` of them) of one parameter."""

    model_config = ConfigDict(populate_by_name=True)

    axis: Literal["kappa1", "kappa2", "a"]
    start: float = Field(..., alias="from")
    stop: float = Field(..., alias="to")
    steps: int = Field(..., ge=2)


class RunConfig(BaseModel):
    """One batch run; which fields are required depends on `mode`."""

    mode: Literal["bound", "lambda1", "sweep", "verify"]
    surface: Optional[SurfaceConfig] = None
    a: HalfWidth = Field(..., description="Half-width of the layer")
    pair: Optional[CurvaturePair] = Field(None, description="Curvatures for lambda1, sweep and verify modes")
    grid_n: int = Field(2000, description="Interior nodes of the coarsest grid")
    resolution: int = Field(128, ge=16, description="Curvature samples per chart axis")
    sweep: Optional[SweepConfig] = None
    seed: int = Field(0, description="Seed of the randomized verify draws")
    draws: int = Field(1000, ge=1, description="Random curvature draws in the potential inequality check")
    hardy_samples: int = Field(30, ge=3, description="Random polynomial test functions in the Hardy check")
    out: Optional[str] = Field(None, description="Report path; stdout when absent")
    csv: Optional[str] = Field(None, description="Sweep table path")

    @field_validator('grid_n')
    def validate_grid_n(cls, v):
        if v < 3:
            raise ValueError(f"grid_n must be at least 3, got {v}")
        return v

    @model_validator(mode='after')
    def validate_mode_fields(self):
        required: Dict[str, List[str]] = {
            "bound": ["surface"],
            "lambda1": ["pair"],
            "sweep": ["sweep", "pair"],
            "verify": [],
        }
        missing = [name for name in required[self.mode] if getattr(self, name) is None]
        if missing:
            raise ValueError(f"Mode '{self.mode}' needs {', '.join(missing)}")
        return self

    def solver_options(self) -> SolverOptions:
        return SolverOptions(n=self.grid_n)


class CheckResult(BaseModel):
    """One entry of the verify suite."""

    name: str
    passed: bool
    value: Optional[float] = None
    reference: Optional[float] = None
    tolerance: Optional[float] = None
    detail: str = ""
