"""Core graph container and transforms."""

import numpy as np
import pytest

from sepskel import SpatialGraph, connected_components, saturate, \
    simplify_contract, smooth_positions

from oracles import adjacency, subset_components
from shapes import complete_graph, cycle_graph, path_graph, random_tree


def _edge_set(graph):
    return {(int(a), int(b)) for a, b in graph.edges()}


# ---- construction ----------------------------------------------------------------

def test_from_edges_dedup_and_symmetry():
    pos = np.zeros((3, 3))
    g = SpatialGraph.from_edges(pos, [(0, 1), (1, 0), (1, 2), (1, 2)])
    assert g.vertex_count == 3
    assert g.edge_count == 2
    assert list(g.neighbors(1)) == [0, 2]
    assert g.has_edge(0, 1) and g.has_edge(1, 0)
    assert not g.has_edge(0, 2)


def test_from_edges_discards_self_loops():
    g = SpatialGraph.from_edges(np.zeros((2, 3)), [(0, 0), (0, 1)])
    assert g.edge_count == 1
    assert not g.has_edge(0, 0)


def test_from_edges_rejects_out_of_range():
    with pytest.raises(ValueError):
        SpatialGraph.from_edges(np.zeros((2, 3)), [(0, 5)])


def test_neighbors_sorted():
    g = SpatialGraph.from_edges(np.zeros((4, 3)), [(2, 3), (2, 0), (2, 1)])
    assert list(g.neighbors(2)) == [0, 1, 3]


def test_degrees_match_edges():
    rng = np.random.default_rng(11)
    for _ in range(20):
        g = random_tree(30, rng)
        degs = g.degrees()
        assert int(degs.sum()) == 2 * g.edge_count
        for v in range(g.vertex_count):
            assert degs[v] == len(g.neighbors(v))


# ---- connected components --------------------------------------------------------

def test_components_path_subset_split():
    g = path_graph(3)
    comps = connected_components(g, [0, 2])
    assert [sorted(c) for c in comps] == [[0], [2]]


def test_components_path_full():
    g = path_graph(3)
    comps = connected_components(g, [0, 1, 2])
    assert [sorted(c) for c in comps] == [[0, 1, 2]]


def test_components_six_cycle_subset():
    g = cycle_graph(6)
    comps = connected_components(g, [1, 2, 4])
    assert [sorted(c) for c in comps] == [[1, 2], [4]]


def test_components_empty_subset():
    g = path_graph(3)
    assert connected_components(g, []) == []


def test_components_partition_property():
    rng = np.random.default_rng(5)
    for _ in range(25):
        n = int(rng.integers(4, 40))
        g = random_tree(n, rng)
        subset = [v for v in range(n) if rng.random() < 0.6]
        comps = connected_components(g, subset)
        seen = sorted(v for c in comps for v in c)
        assert seen == sorted(subset)
        expected = subset_components(adjacency(g), set(subset))
        assert sorted(map(sorted, comps)) == sorted(map(sorted, expected))
        mins = [min(c) for c in comps]
        assert mins == sorted(mins)


# ---- saturation ------------------------------------------------------------------

def test_saturate_k1_identity():
    g = cycle_graph(5)
    assert _edge_set(saturate(g, 1)) == _edge_set(g)


def test_saturate_path_two_hops():
    g = path_graph(3)
    assert _edge_set(saturate(g, 2)) == {(0, 1), (0, 2), (1, 2)}


def test_saturate_four_cycle_to_k4():
    g = cycle_graph(4)
    s = saturate(g, 2)
    assert s.edge_count == 6


def test_saturate_radius_prunes():
    g = path_graph(3, spacing=1.0)
    s = saturate(g, 2, radius=1.5)
    # the 2-hop pair sits 2.0 apart, above the radius
    assert _edge_set(s) == {(0, 1), (1, 2)}


def test_saturate_monotone_in_k():
    rng = np.random.default_rng(17)
    for _ in range(15):
        g = random_tree(int(rng.integers(5, 30)), rng)
        prev = _edge_set(g)
        for k in (1, 2, 3):
            cur = _edge_set(saturate(g, k))
            assert prev <= cur
            prev = cur


# ---- contraction -----------------------------------------------------------------

def test_contract_identity():
    g = cycle_graph(5)
    out, mapping = simplify_contract(g, 1.0)
    assert _edge_set(out) == _edge_set(g)
    assert np.array_equal(mapping, np.arange(5))
    assert np.allclose(out.positions, g.positions)


def test_contract_path_single_step():
    pos = np.array([[0.0, 0, 0], [1.0, 0, 0], [4.0, 0, 0]])
    g = SpatialGraph.from_edges(pos, [(0, 1), (1, 2)])
    out, mapping = simplify_contract(g, 0.67)
    assert out.vertex_count == 2
    assert mapping[0] == mapping[1] != mapping[2]
    merged = out.positions[mapping[0]]
    assert np.allclose(merged, [0.5, 0, 0])


def test_contract_triangle_to_point():
    g = cycle_graph(3)
    out, mapping = simplify_contract(g, 0.34)
    assert out.vertex_count == 1
    assert out.edge_count == 0
    assert set(mapping.tolist()) == {0}
    assert np.allclose(out.positions[0], g.positions.mean(axis=0))


def test_contract_rejects_bad_fraction():
    g = path_graph(3)
    for tf in (0.0, -0.5, 1.5):
        with pytest.raises(ValueError):
            simplify_contract(g, tf)


def test_contract_mapping_total_property():
    rng = np.random.default_rng(23)
    for _ in range(15):
        n = int(rng.integers(6, 50))
        g = random_tree(n, rng)
        tf = float(rng.uniform(0.2, 1.0))
        out, mapping = simplify_contract(g, tf)
        assert mapping.shape == (n,)
        assert set(mapping.tolist()) == set(range(out.vertex_count))
        # no self loops or asymmetry slipped in
        for a, b in out.edges():
            assert a != b


# ---- smoothing -------------------------------------------------------------------

def test_smooth_empty_movable_is_identity():
    g = cycle_graph(6)
    out = smooth_positions(g, [], 3)
    assert np.array_equal(out, g.positions)


def test_smooth_fixed_stay_put():
    g = path_graph(5)
    out = smooth_positions(g, [2], 4)
    fixed = [0, 1, 3, 4]
    assert np.array_equal(out[fixed], g.positions[fixed])


def test_smooth_coincident_neighbors():
    pos = np.array([[2.0, 2, 2], [5.0, 0, 1], [5.0, 0, 1]])
    g = SpatialGraph.from_edges(pos, [(0, 1), (0, 2)])
    out = smooth_positions(g, [0], 1)
    assert np.allclose(out[0], [5.0, 0, 1])


def test_smooth_pulls_into_neighbor_hull():
    pos = np.array([[0.0, 0, 0], [0.9, 0.7, 0], [2.0, 0, 0]])
    g = SpatialGraph.from_edges(pos, [(0, 1), (1, 2)])
    out = smooth_positions(g, [1], 1)
    # one Jacobi round lands on the segment between the fixed neighbors
    assert 0.0 < out[1, 0] < 2.0
    assert abs(out[1, 1]) < 1e-12


def test_smooth_isolated_vertex_unchanged():
    pos = np.array([[0.0, 0, 0], [1.0, 0, 0], [9.0, 9, 9]])
    g = SpatialGraph.from_edges(pos, [(0, 1)])
    out = smooth_positions(g, [2], 5)
    assert np.array_equal(out[2], pos[2])
