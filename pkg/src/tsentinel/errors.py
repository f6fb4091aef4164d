"""
Exception types raised by tsentinel.

Every error derives from TsentinelError and from the matching builtin
(ValueError for bad input, RuntimeError for numerical failure), so callers
may catch either.
"""

from typing import Optional


class TsentinelError(Exception):
    """Base class for all tsentinel errors."""


class TraceFormatError(TsentinelError, ValueError):
    """A telemetry CSV or trace violates the trace format or its invariants."""

    def __init__(
        self, message: str, row: Optional[int] = None, field: Optional[str] = None
    ):
        self.row = row
        self.field = field
        if row is not None:
            message = f"{message} at row {row}"
        super().__init__(message)


class ScenarioError(TsentinelError, ValueError):
    """A scenario description is malformed or inconsistent."""


class FeatureError(TsentinelError, ValueError):
    """Feature names or feature matrices do not fit the requested operation."""


class ModelError(TsentinelError, ValueError):
    """A classifier or detector was given invalid parameters or inputs."""


class EvaluationError(TsentinelError, ValueError):
    """Predictions and ground truth cannot be compared."""


class ConvergenceError(TsentinelError, RuntimeError):
    """The eigen-solver failed to converge."""
