"""Exception types shared across the package."""


class WGLassoError(Exception):
    """Base class for all package errors."""


class NotPositiveDefinite(WGLassoError, ValueError):
    """A matrix that must be positive definite failed its Cholesky factorization."""


class DimensionMismatch(WGLassoError, ValueError):
    pass


class ParseError(WGLassoError, ValueError):
    """Malformed CSV input. ``row`` and ``column`` are 1-based when known."""

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class DegenerateColumn(WGLassoError, ValueError):
    """A variable has zero robust scale (e.g. a constant column)."""

    def __init__(self, message, column=None):
        super().__init__(message)
        self.column = column


class InvalidK(WGLassoError, ValueError):
    pass


class NonSquareInput(WGLassoError, ValueError):
    pass
