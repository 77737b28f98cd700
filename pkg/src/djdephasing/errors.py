"""Exception types raised across the package."""


class ArgumentError(ValueError):
    """An argument is outside the documented domain."""


class InvalidChannelError(ValueError):
    """Kraus operators do not form a trace-preserving channel."""


class MatchingRangeError(ValueError):
    """Variance-matched damping parameter would exceed 1."""


class ConfigParseError(ValueError):
    """A sweep configuration could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ShapeError(ValueError):
    """Records do not cover a rectangular parameter grid."""
