"""
Exceptions raised by the transverse eigenvalue solvers.
"""

from typing import Any, Dict, Optional


class InputError(ValueError):
    """Arguments violate an operation's precondition."""


class SingularityError(ValueError):
    """A weight factor 1 - kappa*u vanishes where the potential is evaluated."""


class NumericalError(RuntimeError):
    """A numerical procedure failed; `diagnostics` says where it stopped."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class InconsistencyError(NumericalError):
    """Weighted and potential solvers disagree beyond their error estimates."""
