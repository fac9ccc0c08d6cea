"""Exception hierarchy shared by all modules."""


class ReebError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ReebError, ValueError):
    """A point or grid lies outside the domain of the requested operation."""


class CoverageError(ReebError, ValueError):
    """The integration radius does not cover the integrand's support."""


class TruncationError(ReebError, RuntimeError):
    """The Runge truncation hit its degree cap before meeting the bound."""

    def __init__(self, message, achieved=None, degree=None):
        super().__init__(message)
        self.achieved = achieved
        self.degree = degree


class ConvergenceError(ReebError, RuntimeError):
    """A series failed to decay within its term budget."""


class ObstructionError(ReebError, RuntimeError):
    """The coboundary does not vanish at the fixed point (0, 0)."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class NotRemovableError(ReebError, ValueError):
    """The isolated singularity has a nonzero principal part."""

    def __init__(self, message, laurent=None):
        super().__init__(message)
        self.laurent = laurent


class ConfigError(ReebError, ValueError):
    """Invalid run configuration."""
