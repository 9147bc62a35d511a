"""Scalar-field sweeps as an alternative separator source."""

import numpy as np
import pytest

from sepskel import HeightField, SpatialGraph, axis_height, pack_separators, \
    sweep_separators

from oracles import pairwise_disjoint, is_connected_subset, \
    sweep_separator_valid
from shapes import cycle_graph, cylinder_graph, path_graph, torus_graph


# ---- height fields ---------------------------------------------------------------

def test_projection_without_smoothing():
    g = path_graph(3, spacing=2.0)
    h = axis_height(g, (1, 0, 0), smooth_iters=0)
    assert h.values.tolist() == [0.0, 2.0, 4.0]


def test_projection_normalises_axis():
    g = path_graph(3)
    a = axis_height(g, (1, 0, 0), smooth_iters=0)
    b = axis_height(g, (10, 0, 0), smooth_iters=0)
    assert np.allclose(a.values, b.values)


def test_projection_rejects_zero_axis():
    with pytest.raises(ValueError):
        axis_height(path_graph(3), (0, 0, 0))
    with pytest.raises(ValueError):
        axis_height(path_graph(3), (1, 0, 0), smooth_iters=-1)


def test_smoothing_single_round():
    g = path_graph(3, spacing=3.0)  # heights 0, 3, 6
    h = axis_height(g, (1, 0, 0), smooth_iters=1)
    assert h.values.tolist() == [1.5, 3.0, 4.5]


def test_smoothing_keeps_constant_field():
    g = cycle_graph(8)
    g = SpatialGraph(np.tile([2.0, 0.0, 0.0], (8, 1)), g.indptr, g.indices)
    h = axis_height(g, (1, 0, 0), smooth_iters=5)
    assert np.allclose(h.values, 2.0)


def test_smoothing_skips_isolated_vertices():
    pos = np.array([[0.0, 0, 0], [1.0, 0, 0], [5.0, 0, 0]])
    g = SpatialGraph.from_edges(pos, [(0, 1)])
    h = axis_height(g, (1, 0, 0), smooth_iters=3)
    assert h.values[2] == 5.0


# ---- sweeping --------------------------------------------------------------------

def test_sweep_path_emits_interior_cuts():
    g = path_graph(5)
    found = sweep_separators(g, axis_height(g, (1, 0, 0), smooth_iters=0))
    assert [sorted(s.vertices) for s in found.separators] == [[1], [3]]
    first = found.separators[0]
    assert first.quality == 1.0
    assert sorted(map(sorted, first.fronts)) == [[0], [2]]


def test_sweep_hexagon_two_singletons():
    g = cycle_graph(6)
    found = sweep_separators(g, axis_height(g, (1, 0, 0), smooth_iters=0))
    assert sorted(sorted(s.vertices) for s in found.separators) == [[2], [4]]


def test_sweep_constant_field_emits_nothing():
    g = cycle_graph(6)
    found = sweep_separators(g, HeightField(np.zeros(6)))
    assert found.separators == []


def test_sweep_rejects_size_mismatch():
    g = path_graph(4)
    with pytest.raises(ValueError):
        sweep_separators(g, HeightField(np.zeros(3)))


def test_sweep_isolated_vertices_emit_nothing():
    g = SpatialGraph.from_edges(np.zeros((3, 3)), [])
    found = sweep_separators(g, HeightField(np.array([0.0, 1.0, 2.0])))
    assert found.separators == []


def test_sweep_cylinder_emits_rings():
    g = cylinder_graph(nseg=6, nring=10)
    found = sweep_separators(g, axis_height(g, (0, 0, 1), smooth_iters=0))
    assert found.separators
    for sep in found.separators:
        # a full ring of the tube, all six segments at one height
        assert len(sep.vertices) == 6
        assert len({v // 6 for v in sep.vertices}) == 1


def test_sweep_properties_on_curved_shapes():
    cases = [
        (cylinder_graph(nseg=6, nring=12), (0, 0, 1)),
        (torus_graph(nmaj=10, nmin=8), (1, 0, 0)),
        (torus_graph(nmaj=10, nmin=8), (0, 1, 0)),
    ]
    for g, axis in cases:
        found = sweep_separators(g, axis_height(g, axis))
        assert found.separators
        assert pairwise_disjoint(s.vertices for s in found.separators)
        for sep in found.separators:
            assert is_connected_subset(g, sep.vertices)
            assert sweep_separator_valid(g, sep)
            assert 0.0 < sep.quality <= 1.0


def test_sweep_output_packs_cleanly():
    g = cylinder_graph(nseg=6, nring=12)
    found = sweep_separators(g, axis_height(g, (0, 0, 1)))
    packed = pack_separators(found)
    assert packed.chosen
    assert pairwise_disjoint(s.vertices for s in packed.chosen)
