"""Voxel grids over axis-aligned bounding boxes.

A grid stores one bit per cell; a cell is occupied exactly when its center
belongs to the represented point set.  All set algebra is plain bitwise
algebra on the occupancy array, so De Morgan identities hold exactly.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .errors import BoxTooSmall, DimMismatch, GridMismatch, IndexOutOfRange

__all__ = [
    "BoundingBox",
    "VoxelGrid",
    "boundary_cells",
    "set_algebra",
    "read_vxg",
    "write_vxg",
]


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box [lo, hi] in dimension 2..4."""

    lo: tuple
    hi: tuple

    def __init__(self, lo, hi):
        lo = tuple(float(v) for v in lo)
        hi = tuple(float(v) for v in hi)
        if len(lo) != len(hi):
            raise DimMismatch(f"lo has dim {len(lo)}, hi has dim {len(hi)}")
        if not 2 <= len(lo) <= 4:
            raise DimMismatch(f"supported dimensions are 2..4, got {len(lo)}")
        if any(a >= b for a, b in zip(lo, hi)):
            raise ValueError(f"box is empty or inverted: lo={lo}, hi={hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def n(self) -> int:
        return len(self.lo)

    @property
    def lo_arr(self) -> np.ndarray:
        return np.asarray(self.lo, dtype=float)

    @property
    def hi_arr(self) -> np.ndarray:
        return np.asarray(self.hi, dtype=float)

    @property
    def extent(self) -> np.ndarray:
        return self.hi_arr - self.lo_arr

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lo_arr) and np.all(x <= self.hi_arr))


class VoxelGrid:
    """Occupancy bitset over a regular subdivision of a bounding box.

    ``occ`` has shape ``res`` (C order, axis i indexed by cell index along
    axis i).  Cell (i_0..i_{n-1}) covers the closed cube
    ``lo + h*i  ..  lo + h*(i+1)`` and its center is ``lo + h*(i + 1/2)``.
    """

    def __init__(self, box: BoundingBox, res, occ: np.ndarray | None = None):
        res = tuple(int(r) for r in res)
        if len(res) != box.n:
            raise DimMismatch(f"res has dim {len(res)}, box has dim {box.n}")
        if any(r < 1 for r in res):
            raise ValueError(f"resolution must be positive, got {res}")
        self.box = box
        self.res = res
        if occ is None:
            occ = np.zeros(res, dtype=bool)
        else:
            occ = np.asarray(occ, dtype=bool)
            if occ.shape != res:
                raise GridMismatch(f"occ shape {occ.shape} != res {res}")
        self.occ = occ

    # -- geometry ------------------------------------------------------

    @property
    def n(self) -> int:
        return self.box.n

    @property
    def cell_size(self) -> np.ndarray:
        return self.box.extent / np.asarray(self.res, dtype=float)

    @property
    def min_cell_edge(self) -> float:
        return float(self.cell_size.min())

    def axis_centers(self, axis: int) -> np.ndarray:
        """Cell-center coordinates along one axis, computed so that centers
        of symmetric boxes land exactly on representable values."""
        lo = self.box.lo[axis]
        hi = self.box.hi[axis]
        r = self.res[axis]
        i = np.arange(r, dtype=float)
        return lo + (2.0 * i + 1.0) * (hi - lo) / (2.0 * r)

    def centers(self) -> np.ndarray:
        """All cell centers, shape res + (n,)."""
        axes = [self.axis_centers(k) for k in range(self.n)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack(mesh, axis=-1)

    def cell_center(self, idx) -> np.ndarray:
        idx = tuple(int(i) for i in idx)
        self._check_idx(idx)
        return np.array([self.axis_centers(k)[idx[k]] for k in range(self.n)])

    def cell_bounds(self, idx) -> tuple[np.ndarray, np.ndarray]:
        idx = np.asarray(idx, dtype=float)
        h = self.cell_size
        lo = self.box.lo_arr + h * idx
        return lo, lo + h

    def cell_of_point(self, x) -> tuple:
        """Index of the cell whose half-open cube [lo, lo+h) contains x
        (clamped to the grid on the hi faces)."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise DimMismatch(f"point has shape {x.shape}, grid dim {self.n}")
        if not self.box.contains(x):
            raise IndexOutOfRange(f"point {x} outside box")
        h = self.cell_size
        idx = np.floor((x - self.box.lo_arr) / h).astype(int)
        idx = np.minimum(idx, np.asarray(self.res) - 1)
        return tuple(int(i) for i in idx)

    def _check_idx(self, idx):
        if len(idx) != self.n:
            raise DimMismatch(f"index has dim {len(idx)}, grid dim {self.n}")
        for k, i in enumerate(idx):
            if not 0 <= i < self.res[k]:
                raise IndexOutOfRange(f"index {idx} outside res {self.res}")

    # -- construction --------------------------------------------------

    @classmethod
    def from_predicate(cls, box: BoundingBox, res, predicate) -> "VoxelGrid":
        """Occupy every cell whose center satisfies ``predicate(centers)``.

        ``predicate`` receives an array of shape (..., n) and must return a
        boolean array of the leading shape.  Evaluation runs in slabs along
        axis 0 to bound memory on fine grids.
        """
        g = cls(box, res)
        axes = [g.axis_centers(k) for k in range(g.n)]
        chunk = max(1, int(2_000_000 // max(1, int(np.prod(res[1:])))))
        for start in range(0, res[0], chunk):
            stop = min(res[0], start + chunk)
            mesh = np.meshgrid(axes[0][start:stop], *axes[1:], indexing="ij")
            block = predicate(np.stack(mesh, axis=-1))
            g.occ[start:stop] = np.asarray(block, dtype=bool)
        return g

    def copy(self) -> "VoxelGrid":
        return VoxelGrid(self.box, self.res, self.occ.copy())

    def with_occ(self, occ: np.ndarray) -> "VoxelGrid":
        return VoxelGrid(self.box, self.res, occ)

    # -- set algebra ----------------------------------------------------

    def _compat(self, other: "VoxelGrid"):
        if self.box != other.box or self.res != other.res:
            raise GridMismatch(
                f"grids differ: box {self.box}/{other.box}, res {self.res}/{other.res}"
            )

    def complement(self) -> "VoxelGrid":
        return self.with_occ(~self.occ)

    def union(self, other: "VoxelGrid") -> "VoxelGrid":
        self._compat(other)
        return self.with_occ(self.occ | other.occ)

    def intersect(self, other: "VoxelGrid") -> "VoxelGrid":
        self._compat(other)
        return self.with_occ(self.occ & other.occ)

    def subset(self, other: "VoxelGrid") -> bool:
        self._compat(other)
        return bool(np.all(~self.occ | other.occ))

    def equal(self, other: "VoxelGrid") -> bool:
        self._compat(other)
        return bool(np.array_equal(self.occ, other.occ))

    def is_empty(self) -> bool:
        return not bool(self.occ.any())

    def count(self) -> int:
        return int(self.occ.sum())

    def occupied_indices(self) -> np.ndarray:
        """Occupied cell indices, shape (k, n), lexicographic order."""
        return np.argwhere(self.occ)

    # -- morphology ------------------------------------------------------

    def boundary_mask(self) -> np.ndarray:
        """Occupied cells with a face neighbor that is unoccupied or outside."""

        def axslice(ax, s):
            sl = [slice(None)] * self.n
            sl[ax] = s
            return tuple(sl)

        occ = self.occ
        inner = occ.copy()
        for ax in range(self.n):
            nb_lo = np.zeros_like(occ)
            nb_lo[axslice(ax, slice(1, None))] = occ[axslice(ax, slice(None, -1))]
            nb_hi = np.zeros_like(occ)
            nb_hi[axslice(ax, slice(None, -1))] = occ[axslice(ax, slice(1, None))]
            inner &= nb_lo & nb_hi
        return occ & ~inner

    def erode(self) -> "VoxelGrid":
        """Remove the boundary layer (face metric)."""
        return self.with_occ(self.occ & ~self.boundary_mask())

    def dilate(self, steps: int = 1) -> "VoxelGrid":
        """Grow by face neighbors ``steps`` times."""
        occ = self.occ.copy()
        for _ in range(steps):
            grown = occ.copy()
            for ax in range(self.n):
                sl_lo = [slice(None)] * self.n
                sl_hi = [slice(None)] * self.n
                sl_lo[ax] = slice(1, None)
                sl_hi[ax] = slice(None, -1)
                grown[tuple(sl_lo)] |= occ[tuple(sl_hi)]
                grown[tuple(sl_hi)] |= occ[tuple(sl_lo)]
            occ = grown
        return self.with_occ(occ)

    def touches_box_boundary(self) -> bool:
        occ = self.occ
        for ax in range(self.n):
            if occ.take(0, axis=ax).any() or occ.take(-1, axis=ax).any():
                return True
        return False

    def require_inside_box(self, name: str = "scene"):
        if self.touches_box_boundary():
            raise BoxTooSmall(f"{name} touches the bounding box; enlarge the box")

    # -- serialization ---------------------------------------------------

    def to_vxg(self) -> bytes:
        """Serialize to the VXG1 text+hex format, bit-exact round trip."""
        head = ["VXG1", str(self.n)]
        head += [str(r) for r in self.res]
        head += [repr(v) for v in self.box.lo]
        head += [repr(v) for v in self.box.hi]
        bits = np.packbits(self.occ.reshape(-1).astype(np.uint8))
        return (" ".join(head) + "\n" + bits.tobytes().hex() + "\n").encode("ascii")

    @classmethod
    def from_vxg(cls, data: bytes) -> "VoxelGrid":
        text = data.decode("ascii")
        header, hexline = text.split("\n")[:2]
        parts = header.split()
        if parts[0] != "VXG1":
            raise ValueError(f"not a VXG1 payload: {parts[0]!r}")
        n = int(parts[1])
        res = tuple(int(v) for v in parts[2 : 2 + n])
        lo = [float(v) for v in parts[2 + n : 2 + 2 * n]]
        hi = [float(v) for v in parts[2 + 2 * n : 2 + 3 * n]]
        ncells = int(np.prod(res))
        raw = np.frombuffer(bytes.fromhex(hexline.strip()), dtype=np.uint8)
        occ = np.unpackbits(raw, count=ncells).astype(bool).reshape(res)
        return cls(BoundingBox(lo, hi), res, occ)

    def sha(self) -> str:
        """Content hash of the VXG1 payload, used as grid id in reports."""
        return hashlib.sha256(self.to_vxg()).hexdigest()

    def __repr__(self):
        return (
            f"VoxelGrid(n={self.n}, res={self.res}, occupied={self.count()}"
            f"/{int(np.prod(self.res))})"
        )


def boundary_cells(grid: VoxelGrid) -> np.ndarray:
    """Indices of occupied cells with an unoccupied or out-of-box face neighbor."""
    return np.argwhere(grid.boundary_mask())


def set_algebra(op: str, a: VoxelGrid, b: VoxelGrid | None = None):
    """Dispatch-style entry point mirroring the file/CLI vocabulary."""
    if op == "complement":
        return a.complement()
    if b is None:
        raise ValueError(f"operation {op!r} needs two grids")
    if op == "union":
        return a.union(b)
    if op == "intersect":
        return a.intersect(b)
    if op == "subset":
        return a.subset(b)
    if op == "equal":
        return a.equal(b)
    raise ValueError(f"unknown set operation {op!r}")


def write_vxg(grid: VoxelGrid, path):
    with open(path, "wb") as fh:
        fh.write(grid.to_vxg())


def read_vxg(path) -> VoxelGrid:
    with open(path, "rb") as fh:
        return VoxelGrid.from_vxg(fh.read())
