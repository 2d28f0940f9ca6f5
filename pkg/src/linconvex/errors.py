"""Exception types shared across the package."""


class LinconvexError(Exception):
    """Base class for all errors raised by this package."""


class DimMismatch(LinconvexError):
    """Objects of different ambient dimension were combined."""


class GridMismatch(LinconvexError):
    """Two grids with different bounding boxes or resolutions were combined."""


class DegenerateParams(LinconvexError):
    """A chart point does not define a valid flat (empty or full space)."""


class PlaneNotInPencil(LinconvexError):
    """The hyperplane handed to the projective normalization does not contain the pencil axis."""


class NearSingular(LinconvexError):
    """A point or cell is too close to the plane sent to infinity."""


class EmptyThroughSet(LinconvexError):
    """The family has no element through the requested point."""


class EmptyGrid(LinconvexError):
    """An operation that needs occupied cells was given an empty grid."""


class NotConnected(LinconvexError):
    """The grid is not face-connected where connectivity is required."""


class NotClosed(LinconvexError):
    """A cubical complex is not closed under taking faces."""


class BoxTooSmall(LinconvexError):
    """A bounded scene touches the boundary of its bounding box."""


class IndexOutOfRange(LinconvexError):
    """A cell or slice index is outside the grid resolution."""


class ReplayMismatch(LinconvexError):
    """A recorded counterexample no longer reproduces its failure."""
