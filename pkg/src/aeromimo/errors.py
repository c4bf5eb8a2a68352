"""Exception taxonomy shared across the package.

The CLI maps these to its exit-code contract: ConfigurationError -> 2,
SolverError -> 3, I/O failures -> 4.
"""

__all__ = ["ConfigurationError", "NumericsError", "SolverError"]


class ConfigurationError(ValueError):
    """Invalid or inconsistent scenario / sweep configuration."""


class NumericsError(ArithmeticError):
    """A numerical routine exceeded its error tolerance or met invalid data."""


class SolverError(NumericsError):
    """A fixed-point solver failed to converge."""

    def __init__(self, message, residual_history=None):
        super().__init__(message)
        self.residual_history = list(residual_history or [])
