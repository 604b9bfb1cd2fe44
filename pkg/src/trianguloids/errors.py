"""Exception hierarchy.

Every error raised by the library derives from :class:`TrianguloidError`,
which is itself a :class:`ValueError` so callers that only care about bad
input can catch that.
"""


class TrianguloidError(ValueError):
    """Base class for all library errors."""


# graphs and subgraphs
class Disconnected(TrianguloidError):
    pass


class IsolatedVertex(TrianguloidError):
    pass


class OutOfRange(TrianguloidError):
    pass


class NotPartialMatching(TrianguloidError):
    pass


class NotAForest(TrianguloidError):
    pass


class TooLarge(TrianguloidError):
    pass


# triangulations
class NotSpanningTree(TrianguloidError):
    pass


class DuplicateDegreeVector(TrianguloidError):
    pass


class CoverageMismatch(TrianguloidError):
    def __init__(self, missing, extra):
        self.missing = sorted(missing)
        self.extra = sorted(extra)
        super().__init__(f"coverage mismatch: missing={self.missing} extra={self.extra}")


class IncompatiblePair(TrianguloidError):
    def __init__(self, b1, b2, cycle):
        self.points = (tuple(b1), tuple(b2))
        self.cycle = list(cycle)
        super().__init__(f"trees at {tuple(b1)} and {tuple(b2)} are incompatible; cycle {' '.join(map(str, self.cycle))}")


class ReconstructionFailed(TrianguloidError):
    pass


class EdgeNotInTree(TrianguloidError):
    pass


class NotReplaceable(TrianguloidError):
    pass


class NotFound(TrianguloidError):
    pass


class PointOutsidePG(TrianguloidError):
    pass


# trianguloids
class NotPreTrianguloid(TrianguloidError):
    pass


class NotTrianguloid(TrianguloidError):
    pass


class ValidationFailed(TrianguloidError):
    pass


class NotComplete(TrianguloidError):
    pass


class InconsistentColoring(TrianguloidError):
    pass


# search / rendering
class LimitExceeded(TrianguloidError):
    pass


class NotThreeRows(TrianguloidError):
    pass
