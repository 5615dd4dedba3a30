"""Exception hierarchy shared by all modules."""


class TessellationError(Exception):
    """Base class for every error raised by this package."""


class DegenerateSegment(TessellationError):
    pass


class DanglingEdge(TessellationError):
    pass


class NonConvexFace(TessellationError):
    pass


class AmbiguousAngle(TessellationError):
    pass


class MissingMark(TessellationError):
    pass


class EmptyWindow(TessellationError):
    pass


class DegenerateCocircularity(TessellationError):
    pass


class IncommensurateWindow(TessellationError):
    pass


class NonpositiveScale(TessellationError):
    pass


class CoincidentCuts(TessellationError):
    pass


class EmptyRegion(TessellationError):
    pass


class OutOfDomain(TessellationError):
    """Planar input parameters violate a feasibility bound."""

    def __init__(self, message, violated=()):
        super().__init__(message)
        self.violated = tuple(violated)


class NonReproducible(TessellationError):
    pass


class ConfigError(TessellationError):
    pass
