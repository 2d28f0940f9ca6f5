"""Flat-vs-cell tests against independent oracles."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from linconvex import (
    AffineSubspace,
    BoundingBox,
    VoxelGrid,
    rasterize_subspace,
    subspace_intersects_cell,
    subspace_misses,
)
from linconvex.errors import DimMismatch
from linconvex.subspace import rasterize_mask


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def test_plane_through_cube_true():
    box = BoundingBox([-0.5, -0.5, -0.5], [0.5, 0.5, 0.5])
    plane = AffineSubspace([0, 0, 0], [[0, 0, 1]])
    assert subspace_intersects_cell(plane, box, (1, 1, 1), (0, 0, 0))


def test_far_line_misses_unit_box():
    box = BoundingBox([0, 0, 0], [1, 1, 1])
    line = AffineSubspace([0, 5, 5], [[0, 1, 0], [0, 0, 1]])
    for cell in np.ndindex((2, 2, 2)):
        assert not subspace_intersects_cell(line, box, (2, 2, 2), cell)


def test_dim_mismatch():
    box = BoundingBox([0, 0], [1, 1])
    plane = AffineSubspace([0, 0, 0], [[0, 0, 1]])
    with pytest.raises(DimMismatch):
        subspace_intersects_cell(plane, box, (2, 2), (0, 0))
    g = VoxelGrid(box, (2, 2))
    with pytest.raises(DimMismatch):
        subspace_misses(g, plane)


def corner_line_oracle(box, res, a, b, c):
    """Cells whose closed cube meets {a x + b y = c}: exact corner-sign test."""
    hit = set()
    g = VoxelGrid(box, res)
    for idx in np.ndindex(res):
        lo, hi = g.cell_bounds(idx)
        corners = [
            a * x + b * y - c
            for x in (lo[0], hi[0])
            for y in (lo[1], hi[1])
        ]
        if min(corners) <= 0.0 <= max(corners):
            hit.add(idx)
    return hit


def test_diagonal_line_2d_matches_corner_oracle():
    # off-lattice offset avoids exact corner tangencies
    box = BoundingBox([0, 0], [8, 8])
    res = (8, 8)
    a, b, c = 1.0, -1.0, -0.37
    line = AffineSubspace.from_equations([[a, b]], [c])
    got = set(map(tuple, rasterize_subspace(line, box, res)))
    assert got == corner_line_oracle(box, res, a, b, c)
    # per-cell predicate agrees with the batch rasterization
    for idx in np.ndindex(res):
        assert subspace_intersects_cell(line, box, res, idx) == (idx in got)


def test_diagonal_line_2d_sampling_soundness():
    # every cell containing a sampled point of the line must be rasterized
    box = BoundingBox([0, 0], [8, 8])
    res = (8, 8)
    line = AffineSubspace.from_equations([[1.0, -1.0]], [-0.37])
    got = set(map(tuple, rasterize_subspace(line, box, res)))
    g = VoxelGrid(box, res)
    t = np.linspace(0.0, 8.0 - 0.37, 10_000)
    pts = np.stack([t, t + 0.37], axis=1)
    for p in pts:
        assert g.cell_of_point(p) in got


def test_plane_layer_counts():
    box = BoundingBox([-1, -1, -1], [1, 1, 1])
    res = (4, 4, 4)
    # off-lattice plane: exactly the one layer containing it
    plane = AffineSubspace([0, 0, 0.1], [[0, 0, 1]])
    cells = rasterize_subspace(plane, box, res)
    assert len(cells) == 16
    assert set(cells[:, 2]) == {2}
    # a plane on a shared cell face touches both adjacent layers (closed cubes)
    plane0 = AffineSubspace([0, 0, 0.0], [[0, 0, 1]])
    cells0 = rasterize_subspace(plane0, box, res)
    assert len(cells0) == 32
    assert set(cells0[:, 2]) == {1, 2}


def test_axis_line_2d():
    box = BoundingBox([-1, -1], [1, 1])
    res = (4, 4)
    line = AffineSubspace.from_equations([[0.0, 1.0]], [0.31])
    cells = rasterize_subspace(line, box, res)
    assert len(cells) == 4
    assert set(cells[:, 1]) == {2}


def test_codim2_diagonal_flat_3d_matches_cell_scan():
    box = BoundingBox([-1, -1, -1], [1, 1, 1])
    res = (6, 6, 6)
    flat = AffineSubspace.from_equations(
        [[1.0, -1.0, 0.0], [0.0, 1.0, -1.0]], [0.21, -0.13]
    )
    got = set(map(tuple, rasterize_subspace(flat, box, res)))
    expect = {
        idx
        for idx in np.ndindex(res)
        if subspace_intersects_cell(flat, box, res, idx)
    }
    assert got == expect
    assert len(got) > 0


@st.composite
def random_flat_and_grid(draw):
    n = draw(st.sampled_from([2, 3]))
    c = draw(st.integers(1, n))
    rng = np.random.default_rng(draw(st.integers(0, 10_000)))
    mat = rng.normal(size=(c, n))
    while np.linalg.matrix_rank(mat) < c:
        mat = rng.normal(size=(c, n))
    point = rng.uniform(-1.2, 1.2, size=n)
    sub = AffineSubspace.from_equations(mat, mat @ point)
    res = (5,) * n
    box = BoundingBox([-1.0] * n, [1.0] * n)
    return sub, box, res


@given(random_flat_and_grid())
@settings(max_examples=60, deadline=None)
def test_rasterize_equals_per_cell_scan(case):
    sub, box, res = case
    mask = rasterize_mask(sub, box, res)
    for idx in np.ndindex(res):
        assert mask[idx] == subspace_intersects_cell(sub, box, res, idx), (
            f"mismatch at {idx} for flat point={sub.point} normals={sub.normals}"
        )


@given(random_flat_and_grid())
@settings(max_examples=40, deadline=None)
def test_rasterize_soundness_center_on_flat(case):
    # any cell whose center lies on the flat must be rasterized
    sub, box, res = case
    mask = rasterize_mask(sub, box, res)
    g = VoxelGrid(box, res)
    centers = g.centers().reshape(-1, sub.n)
    resid = np.abs((centers - sub.point_arr) @ sub.normals_arr.T).max(axis=1)
    on_flat = resid.reshape(res) <= 1e-12
    assert np.all(~on_flat | mask)


def test_misses_empty_and_full():
    box = BoundingBox([-1, -1], [1, 1])
    g_empty = VoxelGrid(box, (8, 8))
    g_full = g_empty.complement()
    line = AffineSubspace.from_equations([[1.0, 0.3]], [0.1])
    assert subspace_misses(g_empty, line)
    assert not subspace_misses(g_full, line)


def test_misses_definitional_consistency():
    rng = np.random.default_rng(5)
    box = BoundingBox([-1, -1], [1, 1])
    g = VoxelGrid(box, (8, 8), rng.random((8, 8)) < 0.3)
    for k in range(20):
        nrm = unit(rng.normal(size=2))
        off = rng.uniform(-1, 1)
        line = AffineSubspace.hyperplane(nrm, off)
        mask = rasterize_mask(line, box, g.res)
        assert subspace_misses(g, line) == (not np.any(mask & g.occ))


def test_line_constructor_and_membership():
    line = AffineSubspace.line([0, 1, 2], [1, 1, 0])
    assert line.dim == 1
    assert line.contains([2, 3, 2])
    assert not line.contains([2, 3, 2.1])
    basis = line.direction_basis()
    assert np.allclose(np.abs(basis[:, 0] @ unit([1, 1, 0])), 1.0)


def test_point_flat_rasterization():
    box = BoundingBox([0, 0], [4, 4])
    pt = AffineSubspace([1.3, 2.2], [[1, 0], [0, 1]])
    cells = rasterize_subspace(pt, box, (4, 4))
    assert set(map(tuple, cells)) == {(1, 2)}


def test_4d_hyperplane_rasterizes():
    box = BoundingBox([-1] * 4, [1] * 4)
    res = (4, 4, 4, 4)
    plane = AffineSubspace.hyperplane([1.0, 0.2, -0.4, 0.6], 0.13)
    mask = rasterize_mask(plane, box, res)
    assert mask.any()
    idx = tuple(np.argwhere(mask)[0])
    assert subspace_intersects_cell(plane, box, res, idx)
