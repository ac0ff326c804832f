class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class SizeLimitError(ValueError):
    """A dense computation was requested beyond its supported size."""


class ConvergenceError(RuntimeError):
    """An iterative solver exhausted its budget without converging."""
