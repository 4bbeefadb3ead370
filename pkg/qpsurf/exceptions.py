"""
Exception hierarchy for qpsurf.

Two families map onto command exit codes:
- InputError: malformed or inconsistent input files (exit code 2)
- DomainError: mathematically invalid requests (exit code 1)
"""

from typing import Optional


class QPSurfError(Exception):
    """Base class for every error raised by the toolkit."""

    exit_code = 1

    def __init__(self, message: str, line: Optional[int] = None):
        self.message = message
        self.line = line
        super().__init__(self.__str__())

    def __str__(self):
        if self.line is not None:
            return f"line {self.line}: {self.message}"
        return self.message


# =============================================================================
# INPUT ERRORS
# =============================================================================

class InputError(QPSurfError):
    exit_code = 2


class TriangulationSyntaxError(InputError):
    """Malformed triangulation text."""


class GluingError(InputError):
    """Half-edge unmatched, matched twice, or glued to itself."""


class PotentialSyntaxError(InputError):
    pass


class EquivalenceSyntaxError(InputError):
    pass


class QuiverSyntaxError(InputError):
    pass


# =============================================================================
# DOMAIN ERRORS
# =============================================================================

class DomainError(QPSurfError):
    exit_code = 1


class OrientationError(DomainError):
    """Gluing would reverse the orientation of a triangle."""


class SameTriangleError(DomainError):
    """The arc borders a single triangle twice."""


class FoldedEdgeError(SameTriangleError):
    """The arc is the folded edge of a self-folded triangle."""


class InvalidTriangulationError(DomainError):
    pass


class InvalidQuiverError(DomainError):
    """Quiver has a loop or an oriented 2-cycle."""


class UntriangulableSurfaceError(DomainError):
    pass


class NotComposableError(DomainError):
    pass


class CompositionTypeError(DomainError):
    """A substitution tail does not run parallel to its arrow."""


class TruncationMismatchError(DomainError):
    pass


class ZeroScaleError(DomainError):
    pass


class IntersectingChordsError(DomainError):
    pass


class NotGenericError(DomainError):
    pass


class NotStronglyGenericError(NotGenericError):
    pass


class NotNormalizableError(DomainError):
    """Standard form would need roots of rational numbers."""


class UnsupportedRankError(DomainError):
    pass


class PreconditionError(DomainError):
    pass


class ReductionError(DomainError):
    pass


class RankError(DomainError):
    """Linear system for the theta coefficients is not one-dimensional."""
