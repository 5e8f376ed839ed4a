"""Exception types shared across modules, mapped to CLI exit codes."""
from __future__ import annotations


class ConfigError(ValueError):
    """Bad configuration: unknown keys, out-of-range values, missing fields."""

    exit_code = 2


class ConvergenceError(RuntimeError):
    """A quadrature or iterative solve failed to reach its tolerance."""

    exit_code = 3


class GeometryError(ValueError):
    """A required ball inclusion (B_6r in B_R, B_8r in B_R, ...) is violated."""

    exit_code = 4


class DegenerateCheckError(ValueError):
    """An inequality check is unverifiable at this resolution (0/0 situation)."""
