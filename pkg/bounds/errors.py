from typing import Optional

from geometry.types import LayerHypothesisDiagnostic


class HypothesisError(ValueError):
    """The layer hypothesis a * max|k_i| < 1 fails; `diagnostic` holds the check."""

    def __init__(self, message: str, diagnostic: Optional[LayerHypothesisDiagnostic] = None):
        super().__init__(message)
        self.diagnostic = diagnostic


class QuadratureError(RuntimeError):
    """The potential integral did not settle after refining the test function's nodes."""
