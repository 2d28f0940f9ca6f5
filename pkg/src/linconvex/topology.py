"""Mod-2 cubical homology of voxel cell sets.

Cells sets become complexes of elementary cubes encoded in doubled
("interval") coordinates: an elementary cube is a vector c in Z^n where
even entries are degenerate axes (a vertex coordinate) and odd entries are
unit intervals; its dimension is the number of odd entries.  A voxel cell
(i_0..i_{n-1}) contributes the closed cube with coordinates in
{2i_k, 2i_k+1, 2i_k+2}.

Betti numbers are computed over GF(2): a free-face collapse first shrinks
the complex (homotopy type preserved), then the ranks of the boundary
operators of the remainder are found by sparse column reduction.  A dense
bitset elimination over the full complex is kept as a brute-force oracle.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import DimMismatch, EmptyGrid, NotClosed, NotConnected
from .grid import VoxelGrid, boundary_cells

__all__ = [
    "BettiVector",
    "CubicalComplex",
    "build_complex",
    "betti_numbers",
    "betti_numbers_dense",
    "connected_components",
    "label_components",
    "sphere_test",
]


@dataclass(frozen=True)
class BettiVector:
    """GF(2) Betti numbers b[k], padded with zeros up to the ambient dimension."""

    b: tuple

    def trimmed(self) -> tuple:
        t = list(self.b)
        while len(t) > 1 and t[-1] == 0:
            t.pop()
        return tuple(t)

    def __getitem__(self, k: int) -> int:
        return self.b[k] if k < len(self.b) else 0

    def __iter__(self):
        return iter(self.b)

    def __len__(self):
        return len(self.b)

    def __repr__(self):
        return f"BettiVector{self.b}"


class CubicalComplex:
    """Elementary-cube complex stored as sorted code arrays per dimension."""

    def __init__(self, n: int, khal_shape, cells_by_dim):
        self.n = n
        self.khal_shape = tuple(int(v) for v in khal_shape)
        self.strides = _strides(self.khal_shape)
        self.cells = [np.asarray(c, dtype=np.int64) for c in cells_by_dim]
        while len(self.cells) < n + 1:
            self.cells.append(np.empty(0, dtype=np.int64))

    # -- basic counts ---------------------------------------------------

    def counts(self) -> tuple:
        return tuple(len(c) for c in self.cells)

    def total_cells(self) -> int:
        return sum(self.counts())

    def top_dim(self) -> int:
        for k in range(self.n, -1, -1):
            if len(self.cells[k]):
                return k
        return 0

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(c) for k, c in enumerate(self.cells))

    # -- code helpers ----------------------------------------------------

    def decode(self, codes: np.ndarray) -> np.ndarray:
        return _decode(codes, self.khal_shape)

    def faces_codes(self, dim: int) -> np.ndarray:
        """Codes of the faces of every dim-cube, shape (m, 2*dim)."""
        codes = self.cells[dim]
        if len(codes) == 0 or dim == 0:
            return np.empty((len(codes), 0), dtype=np.int64)
        coords = self.decode(codes)
        odd = coords % 2 == 1
        out = np.empty((len(codes), 2 * dim), dtype=np.int64)
        for i in range(len(codes)):
            axes = np.nonzero(odd[i])[0]
            for j, ax in enumerate(axes):
                out[i, 2 * j] = codes[i] - self.strides[ax]
                out[i, 2 * j + 1] = codes[i] + self.strides[ax]
        return out

    def validate_closed(self):
        for k in range(1, self.n + 1):
            if len(self.cells[k]) == 0:
                continue
            faces = self.faces_codes(k)
            lower = self.cells[k - 1]
            pos = np.searchsorted(lower, faces.ravel())
            pos = np.minimum(pos, max(len(lower) - 1, 0))
            if len(lower) == 0 or not np.all(lower[pos] == faces.ravel()):
                raise NotClosed(f"a {k}-cube has a missing {k - 1}-face")


def _strides(khal_shape) -> np.ndarray:
    n = len(khal_shape)
    strides = np.ones(n, dtype=np.int64)
    for k in range(n - 2, -1, -1):
        strides[k] = strides[k + 1] * khal_shape[k + 1]
    return strides


def _decode(codes: np.ndarray, khal_shape) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    n = len(khal_shape)
    strides = _strides(khal_shape)
    out = np.empty(codes.shape + (n,), dtype=np.int64)
    rem = codes.copy()
    for k in range(n):
        out[..., k] = rem // strides[k]
        rem = rem % strides[k]
    return out


def build_complex(cells, res=None) -> CubicalComplex:
    """Closed complex of the full elementary cubes of the given voxel cells."""
    cells = np.asarray(list(cells) if not isinstance(cells, np.ndarray) else cells)
    if cells.size == 0:
        if res is None:
            raise ValueError("cannot infer dimension from an empty cell set")
        n = len(res)
        return CubicalComplex(n, tuple(2 * int(r) + 1 for r in res), [[]])
    if cells.ndim != 2:
        raise DimMismatch("cells must be an array of n-indices")
    n = cells.shape[1]
    if res is None:
        res = tuple(int(v) + 1 for v in cells.max(axis=0))
    res = tuple(int(v) for v in res)
    if len(res) != n:
        raise DimMismatch(f"res dim {len(res)} vs cell dim {n}")
    if np.any(cells < 0) or np.any(cells >= np.asarray(res)):
        raise ValueError("cell index outside res")
    khal_shape = tuple(2 * r + 1 for r in res)
    strides = _strides(khal_shape)
    offs = np.stack(
        np.meshgrid(*([[0, 1, 2]] * n), indexing="ij"), axis=-1
    ).reshape(-1, n)
    codes = ((2 * cells[:, None, :] + offs[None, :, :]) * strides).sum(-1)
    codes = np.unique(codes.ravel())
    coords = _decode(codes, khal_shape)
    dims = (coords % 2 == 1).sum(axis=1)
    by_dim = [np.sort(codes[dims == k]) for k in range(n + 1)]
    return CubicalComplex(n, khal_shape, by_dim)


# -- collapse ----------------------------------------------------------------


def _collapse(K: CubicalComplex):
    """Remove free pairs (free face, unique coface) until none remain.

    Returns per-dim Python sets of surviving codes.  Elementary collapses
    preserve the homotopy type, hence the Betti numbers.
    """
    n = K.n
    strides = [int(s) for s in K.strides]
    shape = K.khal_shape
    live = [set(map(int, K.cells[k])) for k in range(n + 1)]
    dim_of = {}
    for k in range(n + 1):
        for c in live[k]:
            dim_of[c] = k

    def axis_parity(code):
        odd_axes = []
        even_axes = []
        rem = code
        for k in range(n):
            q, rem = divmod(rem, strides[k])
            (odd_axes if q % 2 == 1 else even_axes).append((k, q))
        return odd_axes, even_axes

    def faces(code, odd_axes):
        for ax, _ in odd_axes:
            yield code - strides[ax]
            yield code + strides[ax]

    def cofaces(code, even_axes, dim):
        up = live[dim + 1] if dim + 1 <= n else ()
        for ax, q in even_axes:
            if q - 1 >= 0:
                c = code - strides[ax]
                if c in up:
                    yield c
            if q + 1 < shape[ax]:
                c = code + strides[ax]
                if c in up:
                    yield c

    # coface counts
    count = {}
    for k in range(1, n + 1):
        for c in live[k]:
            odd_axes, _ = axis_parity(c)
            for f in faces(c, odd_axes):
                count[f] = count.get(f, 0) + 1

    queue = deque(
        c for k in range(n) for c in live[k] if count.get(c, 0) == 1
    )
    while queue:
        f = queue.popleft()
        kf = dim_of[f]
        if f not in live[kf] or count.get(f, 0) != 1:
            continue
        _, even_axes = axis_parity(f)
        cof = [c for c in cofaces(f, even_axes, kf)]
        if len(cof) != 1:
            continue
        tau = cof[0]
        live[kf].discard(f)
        live[kf + 1].discard(tau)
        odd_t, _ = axis_parity(tau)
        for g in faces(tau, odd_t):
            if g == f:
                continue
            count[g] = count.get(g, 0) - 1
            if g in live[dim_of[g]] and count[g] == 1:
                queue.append(g)
        if kf >= 1:
            odd_f, _ = axis_parity(f)
            for g in faces(f, odd_f):
                count[g] = count.get(g, 0) - 1
                if g in live[dim_of[g]] and count[g] == 1:
                    queue.append(g)
    return live


# -- GF(2) ranks --------------------------------------------------------------


def _sparse_boundary_rank(upper_codes, lower_codes, strides_for_axes, n, khal_shape):
    """Rank over GF(2) of the boundary map from upper cells to lower cells."""
    if not upper_codes or not lower_codes:
        return 0
    lower_index = {c: i for i, c in enumerate(sorted(lower_codes))}
    strides = strides_for_axes

    def face_rows(code):
        rows = []
        rem = code
        for k in range(n):
            q, rem = divmod(rem, strides[k])
            if q % 2 == 1:
                rows.append(lower_index[code - strides[k]])
                rows.append(lower_index[code + strides[k]])
        return rows

    low_to_col = {}
    columns = {}
    rank = 0
    for code in sorted(upper_codes):
        col = set(face_rows(code))
        while col:
            low = max(col)
            other = low_to_col.get(low)
            if other is None:
                low_to_col[low] = col
                rank += 1
                break
            col ^= other
    return rank


def _dense_boundary_rank(K: CubicalComplex, dim: int) -> int:
    """Bitset Gaussian elimination on the full boundary matrix (oracle)."""
    upper = K.cells[dim]
    lower = K.cells[dim - 1]
    if len(upper) == 0 or len(lower) == 0:
        return 0
    faces = K.faces_codes(dim)
    rows = np.searchsorted(lower, faces)
    pivots = {}
    rank = 0
    for i in range(len(upper)):
        colbits = 0
        for r in set(rows[i].tolist()):
            colbits |= 1 << int(r)
        while colbits:
            low = colbits.bit_length() - 1
            if low in pivots:
                colbits ^= pivots[low]
            else:
                pivots[low] = colbits
                rank += 1
                break
    return rank


def betti_numbers(K: CubicalComplex, collapse: bool = True) -> BettiVector:
    """GF(2) Betti numbers b[k] = dim ker d_k - rank d_{k+1}."""
    K.validate_closed()
    n = K.n
    if K.total_cells() == 0:
        return BettiVector((0,) * (n + 1))
    if collapse:
        live = _collapse(K)
    else:
        live = [set(map(int, K.cells[k])) for k in range(n + 1)]
    strides = [int(s) for s in K.strides]
    ranks = [0] * (n + 2)
    for k in range(1, n + 1):
        ranks[k] = _sparse_boundary_rank(
            live[k], live[k - 1], strides, n, K.khal_shape
        )
    b = []
    for k in range(n + 1):
        ck = len(live[k])
        b.append(ck - ranks[k] - ranks[k + 1])
    return BettiVector(tuple(int(v) for v in b))


def betti_numbers_dense(K: CubicalComplex) -> BettiVector:
    """Brute-force Betti numbers without collapsing (test oracle)."""
    K.validate_closed()
    n = K.n
    ranks = [0] * (n + 2)
    for k in range(1, n + 1):
        ranks[k] = _dense_boundary_rank(K, k)
    b = []
    for k in range(n + 1):
        b.append(len(K.cells[k]) - ranks[k] - ranks[k + 1])
    return BettiVector(tuple(int(v) for v in b))


# -- components and classification --------------------------------------------


def label_components(mask: np.ndarray):
    """Face-connected components of a boolean mask: (labels, count)."""
    structure = ndimage.generate_binary_structure(mask.ndim, 1)
    labels, count = ndimage.label(mask, structure=structure)
    return labels, int(count)


def connected_components(cells) -> int:
    """Number of face-connected components of a cell set."""
    if isinstance(cells, VoxelGrid):
        mask = cells.occ
    else:
        mask = np.asarray(cells)
        if mask.dtype != bool:
            idx = np.asarray(cells, dtype=int)
            if idx.size == 0:
                return 0
            res = tuple(idx.max(axis=0) + 1)
            mask = np.zeros(res, dtype=bool)
            mask[tuple(idx.T)] = True
    if not mask.any():
        return 0
    return label_components(mask)[1]


def sphere_test(grid: VoxelGrid, collapse: bool = True):
    """Classify the boundary of an occupied region by its Betti numbers.

    Returns (classification, BettiVector) where classification is "sphere"
    for (1, 0, ..., 0, 1) in degrees 0..n-1, "torus_like" for (1, 2, 1) in
    three dimensions, and "other" otherwise.
    """
    if grid.is_empty():
        raise EmptyGrid("sphere test needs a nonempty grid")
    if connected_components(grid) != 1:
        raise NotConnected("sphere test needs a face-connected region")
    bd = boundary_cells(grid)
    K = build_complex(bd, grid.res)
    bv = betti_numbers(K, collapse=collapse)
    n = grid.n
    sphere = tuple(1 if k in (0, n - 1) else 0 for k in range(n))
    actual = tuple(bv[k] for k in range(n))
    tail_zero = all(bv[k] == 0 for k in range(n, len(bv)))
    if actual == sphere and tail_zero:
        cls = "sphere"
    elif n == 3 and tuple(bv[k] for k in range(3)) == (1, 2, 1) and tail_zero:
        cls = "torus_like"
    else:
        cls = "other"
    return cls, bv
