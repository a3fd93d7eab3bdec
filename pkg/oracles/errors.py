class DomainError(ValueError):
    """Argument outside the domain of a special function or oracle."""


class OracleError(RuntimeError):
    """A reference computation could not bracket or converge to its root."""
