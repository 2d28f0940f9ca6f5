"""Affine flats and their intersection with voxel cells.

A flat of codimension c is stored as a point plus c orthonormal normals.
The reference cell test is a small bounded-variable elimination (Gaussian
elimination on the equality constraints, then Fourier-Motzkin on the box
bounds), which is dimension-generic and exact at tolerance.  Rasterization
of whole grids dispatches to closed-form vectorized paths per codimension
and must agree with the per-cell reference test.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch
from .grid import BoundingBox, VoxelGrid

__all__ = [
    "AffineSubspace",
    "EPS_SCALE",
    "subspace_intersects_cell",
    "rasterize_subspace",
    "rasterize_mask",
    "subspace_misses",
]

# Geometric tolerance is EPS_SCALE times the smallest cell edge.
EPS_SCALE = 1e-9

_ORTHO_TOL = 1e-12


@dataclass(frozen=True)
class AffineSubspace:
    """Affine flat {x : normals @ (x - point) = 0} with orthonormal normals."""

    point: tuple
    normals: tuple  # tuple of tuples, c rows of length n

    def __init__(self, point, normals):
        point = np.asarray(point, dtype=float)
        normals = np.atleast_2d(np.asarray(normals, dtype=float))
        n = point.shape[0]
        c = normals.shape[0]
        if normals.shape[1] != n:
            raise DimMismatch(
                f"normals have dim {normals.shape[1]}, point has dim {n}"
            )
        if not 1 <= c <= n:
            raise ValueError(f"codimension must be in 1..{n}, got {c}")
        gram = normals @ normals.T
        if not np.allclose(gram, np.eye(c), atol=1e-9):
            # accept nearly-orthonormal input, re-orthonormalize mild drift
            q, r = np.linalg.qr(normals.T)
            if np.any(np.abs(np.diag(r)) < _ORTHO_TOL):
                raise ValueError("normals are linearly dependent")
            normals = (q[:, :c] * np.sign(np.diag(r))).T
        object.__setattr__(self, "point", tuple(float(v) for v in point))
        object.__setattr__(
            self, "normals", tuple(tuple(float(v) for v in row) for row in normals)
        )

    @property
    def n(self) -> int:
        return len(self.point)

    @property
    def codim(self) -> int:
        return len(self.normals)

    @property
    def dim(self) -> int:
        return self.n - self.codim

    @property
    def point_arr(self) -> np.ndarray:
        return np.asarray(self.point, dtype=float)

    @property
    def normals_arr(self) -> np.ndarray:
        return np.asarray(self.normals, dtype=float)

    def direction_basis(self) -> np.ndarray:
        """Orthonormal basis of the flat's direction space, shape (n, dim)."""
        nrm = self.normals_arr
        _, _, vt = np.linalg.svd(nrm, full_matrices=True)
        return vt[self.codim :].T

    def contains(self, x, eps: float = 1e-9) -> bool:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise DimMismatch(f"point dim {x.shape} vs flat dim {self.n}")
        resid = self.normals_arr @ (x - self.point_arr)
        return bool(np.all(np.abs(resid) <= eps))

    @classmethod
    def from_equations(cls, coeffs, rhs) -> "AffineSubspace":
        """Flat {x : coeffs @ x = rhs}; rows need not be orthonormal."""
        coeffs = np.atleast_2d(np.asarray(coeffs, dtype=float))
        rhs = np.atleast_1d(np.asarray(rhs, dtype=float))
        point, *_ = np.linalg.lstsq(coeffs, rhs, rcond=None)
        if not np.allclose(coeffs @ point, rhs, atol=1e-9):
            raise ValueError("equation system is inconsistent")
        q, r = np.linalg.qr(coeffs.T)
        keep = np.abs(np.diag(r)) > _ORTHO_TOL
        normals = q[:, : coeffs.shape[0]].T[keep]
        return cls(point, normals)

    @classmethod
    def hyperplane(cls, normal, offset: float) -> "AffineSubspace":
        """Hyperplane {x : normal . x = offset} (normal is normalized here)."""
        normal = np.asarray(normal, dtype=float)
        norm = np.linalg.norm(normal)
        if norm < _ORTHO_TOL:
            raise ValueError("zero normal")
        unit = normal / norm
        return cls(unit * (offset / norm), unit)

    @classmethod
    def line(cls, point, direction) -> "AffineSubspace":
        """Line through ``point`` with the given direction (n >= 2)."""
        point = np.asarray(point, dtype=float)
        direction = np.asarray(direction, dtype=float)
        norm = np.linalg.norm(direction)
        if norm < _ORTHO_TOL:
            raise ValueError("zero direction")
        d = direction / norm
        _, _, vt = np.linalg.svd(d[None, :], full_matrices=True)
        normals = vt[1:]
        return cls(point, normals)


def _geom_eps(box: BoundingBox, res) -> float:
    h = box.extent / np.asarray(res, dtype=float)
    return EPS_SCALE * float(h.min())


def _fourier_motzkin_feasible(A: np.ndarray, c: np.ndarray, eps: float) -> bool:
    """Is {u : A u <= c} nonempty?  Small dense Fourier-Motzkin."""
    A = A.copy()
    c = c.copy()
    while A.shape[1] > 0:
        # normalize rows for a meaningful eps
        scale = np.maximum(np.abs(A).max(axis=1), np.abs(c))
        scale = np.where(scale > 0, scale, 1.0)
        A /= scale[:, None]
        c /= scale
        col = A[:, -1]
        pos = col > 1e-13
        neg = col < -1e-13
        zero = ~(pos | neg)
        rows_a = []
        rows_c = []
        if pos.any() and neg.any():
            ap, cp = A[pos] / col[pos, None], c[pos] / col[pos]
            an, cn = A[neg] / -col[neg, None], c[neg] / -col[neg]
            # u <= cp - ap u', -u <= cn + ... combine: lower <= upper
            for i in range(ap.shape[0]):
                rows_a.append(an[:, :-1] + ap[i, :-1])
                rows_c.append(cn + cp[i])
        if len(rows_a) > 0:
            A_new = np.vstack([A[zero][:, :-1]] + rows_a)
            c_new = np.concatenate([c[zero]] + rows_c)
        else:
            A_new = A[zero][:, :-1]
            c_new = c[zero]
        A, c = A_new, c_new
        if A.shape[0] == 0:
            return True
    return bool(np.all(c >= -eps))


def flat_meets_box(sub: AffineSubspace, lo, hi, eps: float) -> bool:
    """Feasibility of {normals @ (x - point) = 0, lo <= x <= hi}."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    n = sub.n
    A = sub.normals_arr.copy()
    b = A @ sub.point_arr

    # Gaussian elimination with partial pivoting -> x_pivot = t - M @ x_free
    piv_cols = []
    r = 0
    for _ in range(A.shape[0]):
        if r >= A.shape[0]:
            break
        sub_cols = [j for j in range(n) if j not in piv_cols]
        block = np.abs(A[r:, sub_cols])
        if block.size == 0 or block.max() < 1e-13:
            break
        ridx, cidx = np.unravel_index(np.argmax(block), block.shape)
        prow = r + ridx
        pcol = sub_cols[cidx]
        A[[r, prow]] = A[[prow, r]]
        b[[r, prow]] = b[[prow, r]]
        piv = A[r, pcol]
        A[r] /= piv
        b[r] /= piv
        for k in range(A.shape[0]):
            if k != r and abs(A[k, pcol]) > 0:
                b[k] -= A[k, pcol] * b[r]
                A[k] -= A[k, pcol] * A[r]
        piv_cols.append(pcol)
        r += 1
    # rows below rank: 0 = b must hold
    for k in range(r, A.shape[0]):
        if abs(b[k]) > eps:
            return False

    free_cols = [j for j in range(n) if j not in piv_cols]
    # inequalities over free variables u:  G u <= g
    rows = []
    rhs = []
    for idx, j in enumerate(free_cols):
        e = np.zeros(len(free_cols))
        e[idx] = 1.0
        rows.append(e)
        rhs.append(hi[j])
        rows.append(-e)
        rhs.append(-lo[j])
    for ridx, pcol in enumerate(piv_cols):
        coef = np.array([A[ridx, j] for j in free_cols])
        # x_pcol = b[ridx] - coef @ u ;  lo <= x_pcol <= hi
        rows.append(coef)
        rhs.append(b[ridx] - lo[pcol])
        rows.append(-coef)
        rhs.append(hi[pcol] - b[ridx])
    if not rows:
        return True
    G = np.asarray(rows, dtype=float)
    g = np.asarray(rhs, dtype=float)
    return _fourier_motzkin_feasible(G, g, eps)


def _check_dims(sub: AffineSubspace, box: BoundingBox):
    if sub.n != box.n:
        raise DimMismatch(f"flat dim {sub.n} vs box dim {box.n}")


def subspace_intersects_cell(sub: AffineSubspace, box: BoundingBox, res, cell) -> bool:
    """Exact-at-tolerance test whether the flat meets the closed cell cube."""
    _check_dims(sub, box)
    res = tuple(int(v) for v in res)
    cell = tuple(int(v) for v in cell)
    if len(cell) != box.n:
        raise DimMismatch(f"cell index dim {len(cell)} vs box dim {box.n}")
    for k, i in enumerate(cell):
        if not 0 <= i < res[k]:
            raise ValueError(f"cell {cell} outside res {res}")
    h = box.extent / np.asarray(res, dtype=float)
    lo = box.lo_arr + h * np.asarray(cell, dtype=float)
    return flat_meets_box(sub, lo, lo + h, _geom_eps(box, res))


# -- vectorized rasterization ------------------------------------------------


def _axis_centers(box: BoundingBox, res, axis: int) -> np.ndarray:
    lo, hi = box.lo[axis], box.hi[axis]
    r = res[axis]
    return lo + (2.0 * np.arange(r) + 1.0) * (hi - lo) / (2.0 * r)


def _hyperplane_mask(sub, box, res, eps) -> np.ndarray:
    nrm = sub.normals_arr[0]
    off = float(nrm @ sub.point_arr)
    h = box.extent / np.asarray(res, dtype=float)
    r = 0.5 * float(np.abs(nrm) @ h)
    s = np.zeros(res, dtype=float)
    for k in range(box.n):
        shape = [1] * box.n
        shape[k] = res[k]
        s = s + (nrm[k] * _axis_centers(box, res, k)).reshape(shape)
    return np.abs(s - off) <= r + eps


def _point_mask(sub, box, res, eps) -> np.ndarray:
    p = sub.point_arr
    h = box.extent / np.asarray(res, dtype=float)
    mask = np.ones(res, dtype=bool)
    for k in range(box.n):
        shape = [1] * box.n
        shape[k] = res[k]
        ok = np.abs(_axis_centers(box, res, k) - p[k]) <= h[k] / 2 + eps
        mask = mask & ok.reshape(shape)
    return mask


def _segment_cells(p0: np.ndarray, p1: np.ndarray, box, res) -> set:
    """Cells visited by a straight walk from p0 to p1 (both inside the box)."""
    h = box.extent / np.asarray(res, dtype=float)
    lo = box.lo_arr
    length = float(np.linalg.norm(p1 - p0))
    steps = max(2, int(np.ceil(length / float(h.min()) * 3)) + 1)
    t = np.linspace(0.0, 1.0, steps)
    pts = p0[None, :] + t[:, None] * (p1 - p0)[None, :]
    idx = np.floor((pts - lo) / h).astype(int)
    idx = np.clip(idx, 0, np.asarray(res) - 1)
    return set(map(tuple, idx))


def _line_mask(sub, box, res, eps) -> np.ndarray:
    """Cells whose closed cube meets a line (dim 1, codim >= 2)."""
    p = sub.point_arr
    v = sub.direction_basis()[:, 0]
    lo_b = box.lo_arr - eps
    hi_b = box.hi_arr + eps
    tmin, tmax = -np.inf, np.inf
    for k in range(box.n):
        if abs(v[k]) > 1e-13:
            t1 = (lo_b[k] - p[k]) / v[k]
            t2 = (hi_b[k] - p[k]) / v[k]
            tmin = max(tmin, min(t1, t2))
            tmax = min(tmax, max(t1, t2))
        elif not (lo_b[k] <= p[k] <= hi_b[k]):
            return np.zeros(res, dtype=bool)
    mask = np.zeros(res, dtype=bool)
    if tmin > tmax:
        return mask
    q0 = np.clip(p + tmin * v, box.lo_arr, box.hi_arr)
    q1 = np.clip(p + tmax * v, box.lo_arr, box.hi_arr)
    visited = _segment_cells(q0, q1, box, res)
    # dilate by one cell in every direction, then run the exact slab test
    res_arr = np.asarray(res)
    cand = set()
    offs = np.stack(np.meshgrid(*([[-1, 0, 1]] * box.n), indexing="ij"), -1).reshape(
        -1, box.n
    )
    for c in visited:
        for o in offs:
            q = tuple(np.asarray(c) + o)
            if all(0 <= q[k] < res_arr[k] for k in range(box.n)):
                cand.add(q)
    if not cand:
        return mask
    cand = np.asarray(sorted(cand), dtype=int)
    h = box.extent / res_arr.astype(float)
    cell_lo = box.lo_arr + cand * h - eps
    cell_hi = cell_lo + h + 2 * eps
    tmin_c = np.full(len(cand), -np.inf)
    tmax_c = np.full(len(cand), np.inf)
    ok = np.ones(len(cand), dtype=bool)
    for k in range(box.n):
        if abs(v[k]) > 1e-13:
            t1 = (cell_lo[:, k] - p[k]) / v[k]
            t2 = (cell_hi[:, k] - p[k]) / v[k]
            tmin_c = np.maximum(tmin_c, np.minimum(t1, t2))
            tmax_c = np.minimum(tmax_c, np.maximum(t1, t2))
        else:
            ok &= (cell_lo[:, k] <= p[k]) & (p[k] <= cell_hi[:, k])
    ok &= tmin_c <= tmax_c
    hit = cand[ok]
    if len(hit):
        mask[tuple(hit.T)] = True
    return mask


def _generic_mask(sub, box, res, eps) -> np.ndarray:
    """Recursive subdivision fallback for flats of intermediate dimension."""
    res_arr = np.asarray(res, dtype=int)
    h = box.extent / res_arr.astype(float)
    mask = np.zeros(res, dtype=bool)

    def rec(lo_idx, hi_idx):
        lo = box.lo_arr + h * lo_idx
        hi = box.lo_arr + h * hi_idx
        if not flat_meets_box(sub, lo, hi, eps):
            return
        span = hi_idx - lo_idx
        if span.max() == 1:
            mask[tuple(lo_idx)] = True
            return
        ax = int(np.argmax(span))
        mid = lo_idx[ax] + span[ax] // 2
        a_hi = hi_idx.copy()
        a_hi[ax] = mid
        b_lo = lo_idx.copy()
        b_lo[ax] = mid
        rec(lo_idx, a_hi)
        rec(b_lo, hi_idx)

    rec(np.zeros(box.n, dtype=int), res_arr.copy())
    return mask


def rasterize_mask(sub: AffineSubspace, box: BoundingBox, res) -> np.ndarray:
    """Boolean grid of cells whose closed cube meets the flat."""
    _check_dims(sub, box)
    res = tuple(int(v) for v in res)
    eps = _geom_eps(box, res)
    if sub.dim == 0:
        return _point_mask(sub, box, res, eps)
    if sub.codim == 1:
        return _hyperplane_mask(sub, box, res, eps)
    if sub.dim == 1:
        return _line_mask(sub, box, res, eps)
    return _generic_mask(sub, box, res, eps)


def rasterize_subspace(sub: AffineSubspace, box: BoundingBox, res) -> np.ndarray:
    """Indices (k, n) of cells meeting the flat, lexicographic order."""
    return np.argwhere(rasterize_mask(sub, box, res))


def subspace_misses(grid: VoxelGrid, sub: AffineSubspace) -> bool:
    """True iff the flat meets no occupied cell cube of the grid."""
    if sub.n != grid.n:
        raise DimMismatch(f"flat dim {sub.n} vs grid dim {grid.n}")
    mask = rasterize_mask(sub, grid.box, grid.res)
    return not bool(np.any(mask & grid.occ))
