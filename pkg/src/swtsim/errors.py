"""Exception hierarchy.

Split by how the CLI must report them: usage problems exit 1, numeric
failures exit 2.
"""

__all__ = [
    "SwtsimError",
    "UsageError",
    "ConfigError",
    "ExpressionError",
    "NumericError",
    "EvaluationError",
    "ResolutionError",
    "TransformError",
    "SeedingError",
    "SolverError",
]


class SwtsimError(Exception):
    """Base class for all package errors."""


class UsageError(SwtsimError):
    """Bad arguments, unknown ids, malformed input files."""


class ConfigError(UsageError):
    """Problem with a run configuration file."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class ExpressionError(UsageError):
    """Expression syntax error; carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class NumericError(SwtsimError):
    """A computation could not be carried out or failed a validity check."""


class EvaluationError(NumericError):
    """Expression evaluation hit a domain error (1/0, log of <= 0, ...)."""


class ResolutionError(NumericError):
    """A grid is too coarse (or too narrow) for the requested content."""


class TransformError(NumericError):
    """A transform failed an internal consistency assertion."""


class SeedingError(NumericError):
    """Particle seeding produced an unusable ensemble."""


class SolverError(NumericError):
    """A propagation solver failed (non-finite state, breakdown, guard trip)."""
