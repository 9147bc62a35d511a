"""Mesh, voxel, and point-cloud conversion."""

import numpy as np
import pytest

from sepskel import PointCloud, VoxelGrid, mesh_to_graph, points_to_graph, \
    voxels_to_graph

from oracles import knn_edges_brute


def _edge_set(graph):
    return {(int(a), int(b)) for a, b in graph.edges()}


# ---- meshes ----------------------------------------------------------------------

def test_mesh_single_triangle():
    pos = np.array([[0.0, 0, 0], [1.0, 0, 0], [0.0, 1, 0]])
    g = mesh_to_graph(pos, [[0, 1, 2]])
    assert g.vertex_count == 3
    assert g.edge_count == 3


def test_mesh_single_quad_no_diagonal():
    pos = np.array([[0.0, 0, 0], [1.0, 0, 0], [1.0, 1, 0], [0.0, 1, 0]])
    g = mesh_to_graph(pos, [[0, 1, 2, 3]])
    assert g.edge_count == 4
    assert not g.has_edge(0, 2)
    assert not g.has_edge(1, 3)


def test_mesh_shared_edge_dedup():
    pos = np.array([[0.0, 0, 0], [1.0, 0, 0], [0.0, 1, 0], [1.0, 1, 0]])
    g = mesh_to_graph(pos, [[0, 1, 2], [1, 3, 2]])
    assert g.vertex_count == 4
    assert g.edge_count == 5


def test_mesh_degenerate_face_skipped():
    pos = np.zeros((3, 3))
    g = mesh_to_graph(pos, [[0, 1, 2], [0, 0, 1]])
    assert g.edge_count == 3


# ---- voxel grids -----------------------------------------------------------------

def test_voxels_single():
    grid = VoxelGrid(dims=(1, 1, 1), values=np.array([1.0]))
    g = voxels_to_graph(grid, 0.5)
    assert g.vertex_count == 1
    assert g.edge_count == 0


def test_voxels_pair():
    grid = VoxelGrid(dims=(2, 1, 1), values=np.array([1.0, 1.0]))
    g = voxels_to_graph(grid, 0.5)
    assert g.vertex_count == 2
    assert g.edge_count == 1


def test_voxels_cube_is_k8():
    grid = VoxelGrid(dims=(2, 2, 2), values=np.ones(8))
    g = voxels_to_graph(grid, 0.5)
    assert g.vertex_count == 8
    assert g.edge_count == 28


def test_voxels_threshold_strict():
    grid = VoxelGrid(dims=(2, 1, 1), values=np.array([0.5, 1.0]))
    g = voxels_to_graph(grid, 0.5)
    assert g.vertex_count == 1


def test_voxels_empty_foreground():
    grid = VoxelGrid(dims=(2, 2, 1), values=np.zeros(4))
    g = voxels_to_graph(grid, 0.5)
    assert g.vertex_count == 0


def test_voxels_positions_use_spacing():
    grid = VoxelGrid(dims=(2, 1, 1), values=np.ones(2),
                     spacing=(2.0, 1.0, 1.0))
    g = voxels_to_graph(grid, 0.5)
    assert np.allclose(sorted(g.positions[:, 0]), [0.0, 2.0])


def test_voxels_x_fastest_layout():
    # mark (0,0,0) and (1,0,0): adjacent along x in x-fastest order
    values = np.zeros(2 * 2 * 2)
    values[0] = values[1] = 1.0
    g = voxels_to_graph(VoxelGrid(dims=(2, 2, 2), values=values), 0.5)
    assert g.edge_count == 1
    assert np.allclose(g.positions[1] - g.positions[0], [1.0, 0, 0])


def test_voxels_26_versus_6_connectivity():
    # two diagonal voxels touch only corner-wise; 26-connectivity links them
    values = np.zeros(8)
    values[0] = values[7] = 1.0
    g = voxels_to_graph(VoxelGrid(dims=(2, 2, 2), values=values), 0.5)
    assert g.edge_count == 1


# ---- point clouds ----------------------------------------------------------------

def test_points_single():
    g, mapping = points_to_graph(PointCloud(np.zeros((1, 3))), k=1, radius=1.0)
    assert g.vertex_count == 1
    assert g.edge_count == 0
    assert np.array_equal(mapping, [0])


def test_points_collinear_path():
    pts = np.array([[0.0, 0, 0], [1.0, 0, 0], [2.0, 0, 0]])
    g, mapping = points_to_graph(PointCloud(pts), k=1, radius=1.5, l=1,
                                 target_fraction=1.0)
    assert _edge_set(g) == {(0, 1), (1, 2)}
    assert np.array_equal(mapping, [0, 1, 2])


def test_points_collinear_saturated_triangle():
    pts = np.array([[0.0, 0, 0], [1.0, 0, 0], [2.0, 0, 0]])
    g, _ = points_to_graph(PointCloud(pts), k=1, radius=1.5, l=2, l_radius=3.0,
                           target_fraction=1.0)
    assert _edge_set(g) == {(0, 1), (0, 2), (1, 2)}


def test_points_rejects_bad_parameters():
    cloud = PointCloud(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        points_to_graph(cloud, k=0, radius=1.0)
    with pytest.raises(ValueError):
        points_to_graph(cloud, k=1, radius=-2.0)


def test_points_contraction_composes_mapping():
    rng = np.random.default_rng(31)
    pts = rng.random((30, 3))
    g, mapping = points_to_graph(PointCloud(pts), k=4, radius=0.8,
                                 target_fraction=0.5)
    assert mapping.shape == (30,)
    assert mapping.max() < g.vertex_count
    assert set(mapping.tolist()) == set(range(g.vertex_count))


def test_points_knn_matches_oracle():
    rng = np.random.default_rng(47)
    for _ in range(10):
        pts = rng.random((int(rng.integers(5, 40)), 3))
        k = int(rng.integers(1, 5))
        radius = float(rng.uniform(0.2, 0.8))
        g, _ = points_to_graph(PointCloud(pts), k=k, radius=radius, l=1,
                               target_fraction=1.0)
        assert _edge_set(g) == knn_edges_brute(pts, k, radius)
