"""Analytic scene generators.

Every scene voxelizes a set defined by explicit inequalities: a cell is
occupied exactly when its center satisfies the defining predicate.
Openness is recorded for reports only; unbounded sets are clipped to the
bounding box and every verdict derived from them carries a caveat flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BoxTooSmall, IndexOutOfRange
from .grid import BoundingBox, VoxelGrid

__all__ = [
    "SceneSpec",
    "SCENES",
    "make_scene",
    "scene",
    "slice_grid",
    "gradient_check",
    "slice_convexity_report",
    "write_pgm",
    "write_pgm_layers",
]


@dataclass(frozen=True)
class SceneSpec:
    name: str
    params: dict = field(default_factory=dict)
    openness: str = "open"
    box: BoundingBox = None
    res: tuple = None
    unbounded: bool = False
    standin: bool = False

    def caveats(self) -> tuple:
        out = []
        if self.unbounded:
            out.append("unbounded-caveat")
        if self.standin:
            out.append("standin:true")
        return tuple(out)


def _fan(c, params):
    n = float(params.get("n", 1))
    x, y = c[..., 0], c[..., 1]
    return (x >= 0) & (y >= -n * x) & (y <= n * x)


def _fan_union(c, params):
    # limit of the fan sequence: the open half plane plus the origin
    x, y = c[..., 0], c[..., 1]
    tol = 1e-12
    return (x > tol) | ((np.abs(x) <= tol) & (np.abs(y) <= tol))


def _square_annulus(c, params):
    s = np.abs(c[..., 0]) + np.abs(c[..., 2])
    return (s > 1) & (s < 3) & (c[..., 1] > 0) & (c[..., 1] < 1)


def hyperbola_value(c):
    x1, x2, x3 = c[..., 0], c[..., 1], c[..., 2]
    return x1**2 - x2**2 * (1 - x3**2) + x3**2 - 1


def hyperbola_gradient(c):
    x1, x2, x3 = c[..., 0], c[..., 1], c[..., 2]
    return np.stack(
        [2 * x1, -2 * x2 * (1 - x3**2), 2 * x3 * (1 + x2**2)], axis=-1
    )


def _hyperbola_shell(c, params):
    return hyperbola_value(c) > 0


def _ball(c, params):
    r = float(params.get("r", 0.8))
    return np.linalg.norm(c, axis=-1) < r


def _ellipsoid(c, params):
    a = float(params.get("a", 0.9))
    b = float(params.get("b", 0.7))
    cc = float(params.get("c", 0.5))
    semi = np.array([a, b, cc])
    return np.sum((c / semi) ** 2, axis=-1) < 1.0


def _slicewise_blob(c, params):
    """Slicewise-convex smooth positive control: disks drifting on a helix."""
    z = c[..., 2]
    zmax = 0.7
    inside = np.abs(z) < zmax
    cx = 0.22 * np.cos(1.2 * math.pi * z)
    cy = 0.22 * np.sin(1.2 * math.pi * z)
    r2 = 0.30 * np.maximum(0.0, 1.0 - (z / zmax) ** 2)
    d2 = (c[..., 0] - cx) ** 2 + (c[..., 1] - cy) ** 2
    return inside & (d2 < r2)


def _strip_standin(c, params):
    # both hyperbola branches of {x1 x2 > 1}: linearly convex, unbounded, regular
    return c[..., 0] * c[..., 1] > 1.0


def _nonregular_standin(c, params):
    # two tangent disks minus a slit reaching the tangency point
    x, y = c[..., 0], c[..., 1]
    d1 = (x + 0.5) ** 2 + y**2 < 0.25
    d2 = (x - 0.5) ** 2 + y**2 < 0.25
    slit = (np.abs(y) <= 0.03) & (x >= 0.0)
    return (d1 | d2) & ~slit


def _pencil_prism(c, params):
    """Preimage of an axis-aligned box under the pencil normalization for
    {x1 = 0}: {|x2| <= 0.5 x1, |x3| <= 0.5 x1, 1.2 <= 1/x1 <= 2.0}.

    Pencil-convex by construction; its image under the normalization is a
    coordinate box whose faces can be aligned with target grid planes, so
    the projective resampling of a fine enough source grid is alias-free.
    """
    x1 = c[..., 0]
    safe = x1 > 1e-9
    y1 = np.where(safe, c[..., 1] / np.where(safe, x1, 1.0), np.inf)
    y2 = np.where(safe, c[..., 2] / np.where(safe, x1, 1.0), np.inf)
    y3 = np.where(safe, 1.0 / np.where(safe, x1, 1.0), np.inf)
    return (
        safe
        & (np.abs(y1) < 0.5)
        & (np.abs(y2) < 0.5)
        & (y3 > 1.2)
        & (y3 < 2.0)
    )


_PENCIL_BLOB_CENTER = (0.0, 0.0, 2.0)
_PENCIL_BLOB_RHO = 0.6


def _pencil_blob(c, params):
    """Preimage of a ball under the pencil normalization for {x1 = 0}.

    The image of (x1,x2,x3) is (x2/x1, x3/x1, 1/x1); the scene is convex
    for the pencil family by construction and avoids the plane {x1 = 0}.
    """
    cx = params.get("center", _PENCIL_BLOB_CENTER)
    rho = float(params.get("rho", _PENCIL_BLOB_RHO))
    x1 = c[..., 0]
    safe = np.abs(x1) > 1e-9
    y1 = np.where(safe, c[..., 1] / np.where(safe, x1, 1.0), np.inf)
    y2 = np.where(safe, c[..., 2] / np.where(safe, x1, 1.0), np.inf)
    y3 = np.where(safe, 1.0 / np.where(safe, x1, 1.0), np.inf)
    d2 = (y1 - cx[0]) ** 2 + (y2 - cx[1]) ** 2 + (y3 - cx[2]) ** 2
    return safe & (d2 < rho**2)


@dataclass(frozen=True)
class _SceneDef:
    predicate: callable
    box: tuple
    openness: str
    unbounded: bool = False
    standin: bool = False
    bounded_check: bool = False
    odd_axes: tuple = ()  # axes whose resolution is snapped to odd


SCENES = {
    "fan": _SceneDef(_fan, ((0, -4), (4, 4)), "closed", unbounded=True),
    "fan_union": _SceneDef(
        # the singular set {x=0} and the isolated origin must be sampled by
        # cell centers, hence odd resolution on both axes
        _fan_union, ((-4, -4), (4, 4)), "open", unbounded=True, odd_axes=(0, 1)
    ),
    "square_annulus": _SceneDef(
        _square_annulus, ((-4, -4, -4), (4, 4, 4)), "open", bounded_check=True
    ),
    "hyperbola_shell": _SceneDef(
        _hyperbola_shell, ((-3, -3, -3), (3, 3, 3)), "open", unbounded=True
    ),
    "ball": _SceneDef(_ball, ((-1, -1, -1), (1, 1, 1)), "open", bounded_check=True),
    "ellipsoid": _SceneDef(
        _ellipsoid, ((-1, -1, -1), (1, 1, 1)), "open", bounded_check=True
    ),
    "slicewise_blob": _SceneDef(
        _slicewise_blob, ((-1, -1, -1), (1, 1, 1)), "open", bounded_check=True
    ),
    "strip_standin": _SceneDef(
        _strip_standin, ((-4, -4), (4, 4)), "open", unbounded=True, standin=True
    ),
    "nonregular_standin": _SceneDef(
        _nonregular_standin,
        ((-2, -2), (2, 2)),
        "open",
        standin=True,
        bounded_check=True,
    ),
    "ball2d": _SceneDef(_ball, ((-1, -1), (1, 1)), "open", bounded_check=True),
    "pencil_blob": _SceneDef(
        _pencil_blob,
        ((0.05, -0.7, -0.7), (1.05, 0.7, 0.7)),
        "open",
        bounded_check=True,
    ),
    "pencil_prism": _SceneDef(
        _pencil_prism,
        ((0.35, -0.55, -0.55), (1.0, 0.55, 0.55)),
        "open",
        bounded_check=True,
    ),
}


def make_scene(name: str, res=None, box=None, params=None):
    """Build a scene grid; returns (grid, spec)."""
    if name not in SCENES:
        raise ValueError(f"unknown scene {name!r}; known: {sorted(SCENES)}")
    sdef = SCENES[name]
    params = dict(params or {})
    lo, hi = (box.lo, box.hi) if box is not None else sdef.box
    bb = BoundingBox(lo, hi)
    n = bb.n
    if res is None:
        res = (64,) * n
    elif np.isscalar(res):
        res = (int(res),) * n
    res = list(int(v) for v in res)
    for ax in sdef.odd_axes:
        if res[ax] % 2 == 0:
            res[ax] += 1
    res = tuple(res)
    spec = SceneSpec(
        name=name,
        params=params,
        openness=sdef.openness,
        box=bb,
        res=res,
        unbounded=sdef.unbounded,
        standin=sdef.standin,
    )
    grid = scene(spec)
    return grid, spec


def scene(spec: SceneSpec) -> VoxelGrid:
    """Voxelize a scene spec; deterministic for identical specs."""
    sdef = SCENES[spec.name]
    grid = VoxelGrid.from_predicate(
        spec.box, spec.res, lambda c: sdef.predicate(c, spec.params)
    )
    if sdef.bounded_check:
        grid.require_inside_box(spec.name)
    return grid


def slice_grid(grid: VoxelGrid, axis: int, index: int) -> VoxelGrid:
    """(n-1)-dimensional grid of one layer."""
    if not 0 <= axis < grid.n:
        raise IndexOutOfRange(f"axis {axis} outside grid dim {grid.n}")
    if not 0 <= index < grid.res[axis]:
        raise IndexOutOfRange(f"slice {index} outside res {grid.res[axis]}")
    keep = [k for k in range(grid.n) if k != axis]
    box = BoundingBox([grid.box.lo[k] for k in keep], [grid.box.hi[k] for k in keep])
    res = tuple(grid.res[k] for k in keep)
    occ = np.take(grid.occ, index, axis=axis)
    return VoxelGrid(box, res, occ)


def gradient_check(res=96, box=None, n_random=1000, seed=0) -> dict:
    """Gradient sanity for the hyperbola shell: finite-difference agreement
    and the minimum gradient norm over the boundary-band cells."""
    grid, _ = make_scene("hyperbola_shell", res=res, box=box)
    bd = np.argwhere(grid.boundary_mask())
    centers = np.stack(
        [grid.axis_centers(k)[bd[:, k]] for k in range(3)], axis=1
    )
    norms = np.linalg.norm(hyperbola_gradient(centers), axis=-1)
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-2.5, 2.5, size=(n_random, 3))
    h = 1e-5
    fd = np.zeros_like(pts)
    for k in range(3):
        dp = pts.copy()
        dm = pts.copy()
        dp[:, k] += h
        dm[:, k] -= h
        fd[:, k] = (hyperbola_value(dp) - hyperbola_value(dm)) / (2 * h)
    err = np.abs(fd - hyperbola_gradient(pts)).max()
    return {
        "min_boundary_gradient_norm": float(norms.min()),
        "max_fd_error": float(err),
        "boundary_cells": int(len(bd)),
    }


def slice_convexity_report(grid, family_in_slice, budget, seed, axis=None):
    """Per-slice convexity verdicts along the distinguished axis."""
    from .duality import is_convex_wrt

    if axis is None:
        axis = grid.n - 1
    out = []
    for j in range(grid.res[axis]):
        sl = slice_grid(grid, axis, j)
        if sl.is_empty():
            continue
        out.append((j, is_convex_wrt(sl, family_in_slice, budget, seed)))
    return out


def write_pgm(mask: np.ndarray, path):
    """Binary (P5) image of a 2D boolean mask: 0 empty, 255 occupied."""
    if mask.ndim != 2:
        raise ValueError("PGM writer needs a 2D mask")
    data = np.where(mask, 255, 0).astype(np.uint8)
    header = f"P5\n{mask.shape[1]} {mask.shape[0]}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header + data.tobytes())


def write_pgm_layers(grid: VoxelGrid, out_dir, axis: int = 2, prefix: str = "layer"):
    """One PGM per layer along an axis of a 3D grid."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for j in range(grid.res[axis]):
        mask = np.take(grid.occ, j, axis=axis)
        p = os.path.join(out_dir, f"{prefix}_{j:04d}.pgm")
        write_pgm(mask, p)
        paths.append(p)
    return paths
