"""Shared exception types."""


class NotAStateError(ValueError):
    """A matrix or tensor does not describe a physical quantum state."""


class NumericError(RuntimeError):
    """A numerical consistency check failed (stray imaginary parts, non-finite values)."""


class StateFileError(ValueError):
    """A state description file could not be parsed."""
