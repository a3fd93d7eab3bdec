from typing import Optional, Tuple


class ChartError(ValueError):
    """Unknown surface, bad parameters, malformed chart file or a point outside the chart domain."""


class ImmersionError(ValueError):
    """The chart is not an immersion at a point (EG - F^2 <= 0)."""

    def __init__(self, message: str, point: Optional[Tuple[float, float]] = None):
        super().__init__(message)
        self.point = point


class CurvatureConsistencyError(RuntimeError):
    """H^2 - K is negative beyond rounding, so the forms cannot come from a real surface."""
