"""Convexity relative to families of affine flats on voxel grids."""

from .errors import (
    BoxTooSmall,
    DegenerateParams,
    DimMismatch,
    EmptyGrid,
    EmptyThroughSet,
    GridMismatch,
    IndexOutOfRange,
    LinconvexError,
    NearSingular,
    NotClosed,
    NotConnected,
    PlaneNotInPencil,
    ReplayMismatch,
)
from .grid import BoundingBox, VoxelGrid, boundary_cells, read_vxg, set_algebra, write_vxg
from .subspace import (
    AffineSubspace,
    rasterize_subspace,
    subspace_intersects_cell,
    subspace_misses,
)

__version__ = "0.1.0"
