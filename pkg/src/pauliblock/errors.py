"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Matrix or vector dimensions are not the expected powers of two."""


class EncodingError(ValueError):
    """A state or matrix violates the I/X block-encoding contract."""


class ChannelError(ValueError):
    """Kraus pairs do not form a valid trace-preserving channel."""


class ParseError(ValueError):
    """Malformed circuit or Hamiltonian text; carries the offending line."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class IntegratorError(RuntimeError):
    """Trajectory integration drifted outside its stability tolerances."""


class SearchFailure(RuntimeError):
    """Target extraction exhausted its retry budget."""
