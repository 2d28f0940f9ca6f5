"""Grid, set algebra, boundary extraction and VXG1 round trip."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from linconvex import BoundingBox, VoxelGrid, boundary_cells, set_algebra
from linconvex.errors import BoxTooSmall, DimMismatch, GridMismatch, IndexOutOfRange


def random_grid(seed, n=2, res=8):
    rng = np.random.default_rng(seed)
    box = BoundingBox([-1.0] * n, [1.0] * n)
    occ = rng.random((res,) * n) < 0.4
    return VoxelGrid(box, (res,) * n, occ)


def test_box_validation():
    with pytest.raises(ValueError):
        BoundingBox([0, 0], [0, 1])
    with pytest.raises(DimMismatch):
        BoundingBox([0, 0], [1, 1, 1])
    with pytest.raises(DimMismatch):
        BoundingBox([0], [1])
    with pytest.raises(DimMismatch):
        BoundingBox([0] * 5, [1] * 5)


def test_grid_mismatch_raises():
    a = random_grid(0)
    b = VoxelGrid(BoundingBox([-1, -1], [1, 2]), (8, 8))
    with pytest.raises(GridMismatch):
        a.union(b)
    c = VoxelGrid(a.box, (8, 4))
    with pytest.raises(GridMismatch):
        set_algebra("intersect", a, c)


def test_cell_centers_exact_on_symmetric_box():
    g = VoxelGrid(BoundingBox([-4, -4], [4, 4]), (65, 65))
    assert g.axis_centers(0)[32] == 0.0
    g2 = VoxelGrid(BoundingBox([-1, -1], [1, 1]), (4, 4))
    assert np.allclose(g2.axis_centers(0), [-0.75, -0.25, 0.25, 0.75])


def test_cell_of_point_and_bounds():
    g = VoxelGrid(BoundingBox([0, 0], [4, 4]), (4, 4))
    assert g.cell_of_point([0.5, 3.5]) == (0, 3)
    assert g.cell_of_point([4.0, 4.0]) == (3, 3)  # hi faces clamp inward
    with pytest.raises(IndexOutOfRange):
        g.cell_of_point([5.0, 0.0])
    lo, hi = g.cell_bounds((1, 2))
    assert np.allclose(lo, [1.0, 2.0]) and np.allclose(hi, [2.0, 3.0])


@given(st.integers(0, 500))
@settings(max_examples=50, deadline=None)
def test_complement_involution(seed):
    g = random_grid(seed)
    assert g.complement().complement().equal(g)


@given(st.integers(0, 500), st.integers(501, 1000))
@settings(max_examples=50, deadline=None)
def test_boolean_algebra_laws(sa, sb):
    a, b = random_grid(sa), random_grid(sb)
    # De Morgan, exactly
    lhs = a.union(b).complement()
    rhs = a.complement().intersect(b.complement())
    assert lhs.equal(rhs)
    assert a.subset(a.union(b))
    assert a.intersect(b).subset(a)


def test_intersect_matches_per_cell_oracle():
    a, b = random_grid(11), random_grid(12)
    got = a.intersect(b)
    for idx in np.ndindex(a.res):
        assert got.occ[idx] == (a.occ[idx] and b.occ[idx])


def test_boundary_full_cube_3d():
    box = BoundingBox([0, 0, 0], [1, 1, 1])
    g = VoxelGrid(box, (3, 3, 3), np.ones((3, 3, 3), dtype=bool))
    bd = boundary_cells(g)
    assert len(bd) == 26  # all but the center cell
    assert (1, 1, 1) not in set(map(tuple, bd))


def test_boundary_single_cell_and_empty():
    box = BoundingBox([0, 0], [1, 1])
    g = VoxelGrid(box, (4, 4))
    assert len(boundary_cells(g)) == 0
    g.occ[2, 1] = True
    assert set(map(tuple, boundary_cells(g))) == {(2, 1)}


def test_boundary_ball_matches_direct_scan():
    box = BoundingBox([-1, -1, -1], [1, 1, 1])
    res = (32, 32, 32)
    g = VoxelGrid.from_predicate(
        box, res, lambda c: np.linalg.norm(c, axis=-1) <= 0.8
    )
    got = set(map(tuple, boundary_cells(g)))
    # oracle: direct scan over occupied cells checking face neighbors
    occ = g.occ
    expect = set()
    for idx in np.argwhere(occ):
        idx = tuple(idx)
        on_edge = False
        for ax in range(3):
            for d in (-1, 1):
                nb = list(idx)
                nb[ax] += d
                if not 0 <= nb[ax] < res[ax] or not occ[tuple(nb)]:
                    on_edge = True
        if on_edge:
            expect.add(idx)
    assert got == expect


def test_boundary_subset_and_emptiness_rule():
    g = random_grid(3, res=10)
    bd = g.boundary_mask()
    assert np.all(~bd | g.occ)  # boundary cells are occupied
    full = g.with_occ(np.ones(g.res, dtype=bool))
    assert full.boundary_mask().any()  # full box still has an outer shell


def test_erode_dilate():
    box = BoundingBox([0, 0], [1, 1])
    occ = np.zeros((8, 8), dtype=bool)
    occ[2:6, 2:6] = True
    g = VoxelGrid(box, (8, 8), occ)
    er = g.erode()
    assert er.count() == 4  # inner 2x2
    dl = g.dilate()
    assert dl.count() == 16 + 4 * 4  # square grows by a face ring


@given(st.integers(0, 300), st.sampled_from([2, 3]))
@settings(max_examples=40, deadline=None)
def test_vxg_roundtrip_bit_exact(seed, n):
    g = random_grid(seed, n=n, res=6)
    payload = g.to_vxg()
    back = VoxelGrid.from_vxg(payload)
    assert back.box == g.box
    assert back.res == g.res
    assert np.array_equal(back.occ, g.occ)
    assert back.to_vxg() == payload
    assert back.sha() == g.sha()


def test_vxg_file_io(tmp_path):
    from linconvex import read_vxg, write_vxg

    g = random_grid(7, n=3, res=5)
    p = tmp_path / "g.vxg"
    write_vxg(g, p)
    assert read_vxg(p).equal(g)


def test_require_inside_box():
    box = BoundingBox([0, 0], [1, 1])
    occ = np.zeros((4, 4), dtype=bool)
    occ[0, 2] = True
    g = VoxelGrid(box, (4, 4), occ)
    with pytest.raises(BoxTooSmall):
        g.require_inside_box()
    occ2 = np.zeros((4, 4), dtype=bool)
    occ2[1:3, 1:3] = True
    VoxelGrid(box, (4, 4), occ2).require_inside_box()
