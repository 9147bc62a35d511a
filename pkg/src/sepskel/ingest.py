"""Turning meshes, voxel grids and point clouds into spatial graphs.

Meshes contribute face boundary edges only (quads stay quads, no diagonal).
Voxel grids connect foreground cells over the full 26-neighbourhood. Point
clouds go through symmetric k-nearest-neighbour linking on a uniform grid,
then hop saturation, then contraction, mirroring how thin structures are
usually condensed before skeletonisation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import SpatialGraph, saturate, simplify_contract


@dataclass
class VoxelGrid:
    """Dense scalar grid. ``values`` is flat with x varying fastest."""
    dims: tuple[int, int, int]
    values: np.ndarray
    spacing: tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self):
        nx, ny, nz = self.dims
        self.values = np.asarray(self.values, dtype=np.float32).reshape(-1)
        if self.values.size != nx * ny * nz:
            raise ValueError("value count does not match dims")
        if min(self.dims) < 0:
            raise ValueError("negative grid dimension")
        if min(self.spacing) <= 0:
            raise ValueError("spacing must be positive")


@dataclass
class PointCloud:
    points: np.ndarray

    def __post_init__(self):
        self.points = np.ascontiguousarray(self.points, dtype=np.float64)
        if self.points.ndim != 2 or self.points.shape[1] != 3:
            raise ValueError("points must be an (n, 3) array")


# ---- meshes -------------------------------------------------------------------

def mesh_to_graph(positions, faces) -> SpatialGraph:
    """Graph of a polygon mesh: vertices plus face boundary edges.

    Vertices referenced by no face stay isolated. Faces must have 3 or 4
    vertices; faces with repeated vertex ids are skipped.
    """
    positions = np.asarray(positions, dtype=np.float64)
    edges = []
    for f in faces:
        if len(f) not in (3, 4):
            raise ValueError("faces must have 3 or 4 vertices")
        if len(set(f)) != len(f):
            continue
        for i in range(len(f)):
            edges.append((f[i], f[(i + 1) % len(f)]))
    return SpatialGraph.from_edges(positions,
                                   np.asarray(edges, np.int64).reshape(-1, 2))


# ---- voxels --------------------------------------------------------------------

def voxels_to_graph(grid: VoxelGrid, threshold: float) -> SpatialGraph:
    """Graph of foreground voxels (value > threshold), 26-connected.

    Vertex ids follow the flat x-fastest scan order; positions are
    index * spacing per axis.
    """
    nx, ny, nz = grid.dims
    vol = grid.values.reshape((nx, ny, nz), order="F")
    fg = vol > threshold
    flat_fg = fg.reshape(-1, order="F")
    idx = np.flatnonzero(flat_fg)
    n = idx.size
    vid = np.full(nx * ny * nz, -1, np.int64)
    vid[idx] = np.arange(n)
    xs = idx % nx
    ys = (idx // nx) % ny
    zs = idx // (nx * ny)
    sx, sy, sz = grid.spacing
    positions = np.column_stack((xs * sx, ys * sy, zs * sz)).astype(np.float64)

    vid3 = vid.reshape((nx, ny, nz), order="F")
    edges = []
    offsets = [(dx, dy, dz)
               for dx in (-1, 0, 1) for dy in (-1, 0, 1) for dz in (-1, 0, 1)
               if (dx, dy, dz) > (0, 0, 0)]
    for dx, dy, dz in offsets:
        def sl(d, size):
            return (slice(0, size - d) if d >= 0 else slice(-d, size),
                    slice(d, size) if d >= 0 else slice(0, size + d))
        (ax, bx), (ay, by), (az, bz) = sl(dx, nx), sl(dy, ny), sl(dz, nz)
        a = vid3[ax, ay, az]
        b = vid3[bx, by, bz]
        m = (a >= 0) & (b >= 0)
        if m.any():
            edges.append(np.column_stack((a[m], b[m])))
    pairs = np.vstack(edges) if edges else np.empty((0, 2), np.int64)
    return SpatialGraph.from_edges(positions, pairs)


# ---- point clouds ---------------------------------------------------------------

def _knn_within_radius(points: np.ndarray, k: int, radius: float) -> SpatialGraph:
    """Symmetric kNN graph over a uniform grid with cell size = radius."""
    n = points.shape[0]
    if n == 0:
        return SpatialGraph.from_edges(points, np.empty((0, 2), np.int64))
    origin = points.min(axis=0)
    cells = np.floor((points - origin) / radius).astype(np.int64)
    gx, gy, gz = (int(cells[:, a].max()) + 1 for a in range(3))
    keys = (cells[:, 0] * gy + cells[:, 1]) * gz + cells[:, 2]
    order = np.argsort(keys, kind="stable")
    sorted_keys = keys[order]
    src, dst = _kernels.knn_pairs(points, cells[:, 0], cells[:, 1], cells[:, 2],
                                  gx, gy, gz, sorted_keys, order,
                                  int(k), float(radius))
    return SpatialGraph.from_edges(points, np.column_stack((src, dst)))


def points_to_graph(cloud: PointCloud, k: int, radius: float,
                    l: int = 3, l_radius: float | None = None,
                    target_fraction: float = 1.0):
    """Point cloud to graph: kNN linking, hop saturation, contraction.

    ``l`` is the saturation hop count (default 3) and ``l_radius`` its
    distance cap (default twice the kNN radius). Returns (graph, mapping)
    with mapping[point] = output vertex id.
    """
    if int(k) != k or k < 1:
        raise ValueError("k must be a positive integer")
    if radius <= 0:
        raise ValueError("radius must be positive")
    if int(l) != l or not (1 <= l < 10):
        raise ValueError("saturation level must be an integer in [1, 10)")
    if l_radius is None:
        l_radius = 2.0 * radius
    g = _knn_within_radius(cloud.points, int(k), float(radius))
    g = saturate(g, int(l), float(l_radius))
    return simplify_contract(g, target_fraction)
