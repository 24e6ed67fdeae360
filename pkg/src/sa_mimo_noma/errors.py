"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """A scenario/config value violates a documented constraint."""


class NumericalError(RuntimeError):
    """A numerical routine failed (quadrature non-convergence, rank loss, ...)."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class DegenerateChannelError(NumericalError):
    """A fading draw produced a rank-deficient stacked channel matrix."""


class InvariantViolation(RuntimeError):
    """A built-in self-check failed during a verify run."""
