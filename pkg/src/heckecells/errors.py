"""Exception types shared across the package."""

__all__ = [
    "HeckeCellsError",
    "NonDominant",
    "TypeMismatch",
    "BasisMismatch",
    "BoundExceeded",
    "InexactAValue",
    "ClosureViolation",
    "IdealViolation",
    "NoBijection",
]


class HeckeCellsError(Exception):
    """Base class for all package errors."""


class NonDominant(HeckeCellsError):
    """A coweight that had to be dominant is not."""


class TypeMismatch(HeckeCellsError):
    """Operands built over different Cartan data."""


class BasisMismatch(HeckeCellsError):
    """A Hecke operation received elements in the wrong basis."""


class BoundExceeded(HeckeCellsError):
    """A computation left the enumerated length ball.

    ``needed`` carries the smallest sufficient bound when derivable,
    so callers can rerun with a bigger ball instead of guessing.
    """

    def __init__(self, message: str, needed: int | None = None):
        super().__init__(message)
        self.needed = needed


class InexactAValue(HeckeCellsError):
    """An operation needed an exact a-value but only a lower bound is known."""


class ClosureViolation(HeckeCellsError):
    """A product of minimal double coset basis elements left their span."""


class IdealViolation(HeckeCellsError):
    """A cell-quotient computation produced a term in a strictly higher cell."""


class NoBijection(HeckeCellsError):
    """Cells and unipotent classes do not match one to one."""
