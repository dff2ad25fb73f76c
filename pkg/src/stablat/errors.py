"""Exception types shared across the package.

Every error raised on bad input or a violated precondition derives from
StablatError, so callers can catch one type at the boundary (the CLI maps
them to exit codes).
"""

from __future__ import annotations


class StablatError(Exception):
    """Base class for all package errors."""


class InputError(StablatError):
    """Malformed or inconsistent input data (dimensions, parse failures)."""


class PreconditionError(StablatError):
    """A documented operation precondition does not hold."""


class HoleClassError(PreconditionError):
    """The central charge vanishes on the given class."""

    def __init__(self, vector) -> None:
        super().__init__(f"central charge vanishes on {vector}")
        self.vector = vector


class OrthogonalPlanesError(StablatError):
    """Two positive planes paired to a singular matrix (defensive check)."""


class OnWallError(StablatError):
    """A query point lies on a wall, so no chamber can be assigned."""

    def __init__(self, delta, value) -> None:
        super().__init__(f"point lies on the wall of {delta} (value {value})")
        self.delta = delta
        self.value = value


class InconsistencyError(StablatError):
    """Constraint propagation produced an empty set of admissible phases."""
