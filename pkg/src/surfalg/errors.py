"""Exception types shared across the package.

All domain errors derive from :class:`SurfaceError` (a ``ValueError``), so
callers can catch everything with one clause while tests pin the precise
subclass.  Parse-time errors carry the offending label.
"""


class SurfaceError(ValueError):
    """Base class for all errors raised by this package."""


class ParseError(SurfaceError):
    """A document does not describe a valid ideal triangulation."""

    def __init__(self, message, label=None):
        super().__init__(message)
        self.label = label


class DuplicateArcUse(ParseError):
    """An arc label occurs in more than two side slots."""


class UnglueableSide(ParseError):
    """An arc label occurs in exactly one side slot."""


class Disconnected(ParseError):
    """The glued complex is not connected."""


class MonogonOrDigon(ParseError):
    """An arc would cut out a monogon or digon (degenerate gluing)."""


class NonOrientableGluing(ParseError):
    """The two slots of an arc carry the same traversal direction."""


class PuncturedSurface(ParseError):
    """A corner orbit closes up in the interior (marked point off the boundary)."""


class UnknownArc(SurfaceError):
    """An arc label is not part of the triangulation."""


class UnknownVertex(SurfaceError):
    """A vertex label is not part of the quiver."""


class BoundarySegmentNotFlippable(SurfaceError):
    """Flip was requested at a boundary segment."""


class DiscSurface(SurfaceError):
    """The operation requires a surface that is not a disc."""


class InvariantViolation(SurfaceError):
    """An internal consistency invariant failed to hold."""


class NotOneDegree(SurfaceError):
    """The degree map does not sum to one around every face."""


class NotAdmissible(SurfaceError):
    """The degree map is not an admissible cut."""


class NotGentle(SurfaceError):
    """The presentation violates a gentleness condition."""


class ArrowInTwoFaces(SurfaceError):
    """An arrow belongs to more than one face."""


class InvalidWord(SurfaceError):
    """A curve word is not a closed transversal word."""


class QuiverMismatch(SurfaceError):
    """Two degree maps live on different quivers."""


class GenusNonzero(SurfaceError):
    """The complete decision procedure only applies in genus zero."""


class SurfaceMismatch(SurfaceError):
    """The two triangulations do not triangulate the same surface."""


class GeneratorCountMismatch(SurfaceError):
    """A generator system has the wrong number of entries."""
