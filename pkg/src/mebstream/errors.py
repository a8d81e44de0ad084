"""Exception types shared across the package."""


class MebstreamError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatchError(MebstreamError, ValueError):
    """Two points (or a point and a structure) disagree on dimension."""


class InvalidParameterError(MebstreamError, ValueError):
    """A parameter is outside its documented range."""


class InvalidConfigError(InvalidParameterError):
    """A benchmark configuration fails validation."""


class ConvergenceError(MebstreamError, RuntimeError):
    """The ball solver hit its iteration cap before reaching tolerance."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class UnsupportedDimensionError(MebstreamError, ValueError):
    """The exact solver was asked for a dimension above its cap."""


class DegenerateKernelError(MebstreamError, ValueError):
    """Kernel width estimation got a sample with no distinct pair."""


class DegenerateWindowError(MebstreamError, ValueError):
    """The error metric needs a window with a strictly positive radius."""


class WarmupError(MebstreamError, RuntimeError):
    """A sliding-window structure was queried before it can answer."""


class ParseError(MebstreamError, ValueError):
    """A point file is malformed; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class NumericsError(MebstreamError, RuntimeError):
    """A quantity that must be nonnegative came out far below zero."""
