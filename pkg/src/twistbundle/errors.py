"""Exception hierarchy shared across the package.

ValidationError covers bad inputs (malformed specs, shape or group mismatches)
and maps to CLI exit code 1. ConstructionError covers failures of the
mathematical construction itself (flatness refusals, orthogonality violations)
and maps to CLI exit code 2.
"""

from __future__ import annotations

__all__ = [
    "ValidationError",
    "GroupValidationError",
    "IdentityLawError",
    "LatinSquareError",
    "AssociativityError",
    "InverseError",
    "ElementParseError",
    "GroupMismatchError",
    "ShapeError",
    "SingularMatrixError",
    "SpecError",
    "ConstructionError",
    "FlatnessError",
    "OrthogonalityError",
]


class ValidationError(ValueError):
    """Invalid input: the request can never succeed as stated."""


class GroupValidationError(ValidationError):
    """A multiplication table fails to describe a group."""


class IdentityLawError(GroupValidationError):
    """Index 0 does not act as a two-sided identity named 'e'."""


class LatinSquareError(GroupValidationError):
    """Some row or column of the table is not a permutation."""


class AssociativityError(GroupValidationError):
    """The table violates (a*b)*c = a*(b*c) for some triple."""


class InverseError(GroupValidationError):
    """Some element has no two-sided inverse."""


class ElementParseError(ValidationError):
    """A group-algebra element expression does not match the grammar."""


class GroupMismatchError(ValidationError):
    """Operands belong to different groups."""


class ShapeError(ValidationError):
    """Matrix dimensions are inconsistent with the requested operation."""


class SingularMatrixError(ValidationError):
    """A matrix inverse was requested for a singular matrix."""


class SpecError(ValidationError):
    """A code-spec document is malformed or inconsistent."""


class ConstructionError(RuntimeError):
    """The construction failed on mathematically invalid data."""


class FlatnessError(ConstructionError):
    """Twists are not chain-compatible with the fiber boundary."""


class OrthogonalityError(ConstructionError):
    """The expanded check matrices violate H_X * H_Z^T = 0."""
