"""
Data models for the annulus reference problems using Pydantic.
"""

from pydantic import BaseModel, Field, PositiveFloat, model_validator


class AnnulusSpec(BaseModel):
    """Planar annulus r_in < |x| < r_out with Dirichlet conditions on both circles."""

    r_in: PositiveFloat = Field(..., description="Inner radius")
    r_out: PositiveFloat = Field(..., description="Outer radius")

    @model_validator(mode='after')
    def validate_radii(self):
        if not self.r_in < self.r_out:
            raise ValueError(f"Annulus needs r_in < r_out, got ({self.r_in}, {self.r_out})")
        return self

    @property
    def width(self) -> float:
        return self.r_out - self.r_in

    @classmethod
    def about_circle(cls, kappa: float, a: float) -> "AnnulusSpec":
        """The strip (-a, a) about a circle of curvature kappa, i.e. radii 1/kappa -+ a."""
        return cls(r_in=1.0 / kappa - a, r_out=1.0 / kappa + a)
