"""Exception types shared across modules."""


class PrecisionError(ValueError):
    """A coefficient was requested beyond the known precision of a table."""


class ExtendPrecisionError(PrecisionError):
    """A Jacobi coefficient table is too short for the requested Siegel index."""

    def __init__(self, needed: int, available: int):
        super().__init__(f"need Jacobi discriminant {needed}, table stops at {available}")
        self.needed = needed
        self.available = available


class InvariantViolation(RuntimeError):
    """An exact identity that must hold did not; indicates a bug, not bad input."""
