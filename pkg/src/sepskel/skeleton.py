"""Skeleton construction from a disjoint separator packing.

The steps, in pipeline order: every vertex is assigned to its nearest packed
separator along graph edges (maximisation), the assignment classes are
collapsed to one node each (quotient graph), triangle clusters among the nodes
are replaced by star centers, node positions are optionally relaxed by
weighted Laplacian smoothing, and each node is annotated with the mean
distance to the input vertices it represents.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, replace

import numpy as np

from .graph import SpatialGraph, connected_components
from .packing import PackedSeparators


@dataclass
class Skeleton:
    """Skeleton graph plus per-node and per-input-vertex attributes.

    ``weights[c]`` is the number of input vertices represented by node c
    (star centers carry the mean weight of their leaves). ``radii[c]`` is the
    mean distance from the node to its assigned input vertices, zero until
    :func:`annotate_radii` runs. ``assignment[v]`` maps every input vertex to
    a node id; star centers receive no input vertices, so they are exactly
    the ids missing from ``assignment``.
    """
    graph: SpatialGraph
    weights: np.ndarray
    radii: np.ndarray
    assignment: np.ndarray

    def star_nodes(self) -> np.ndarray:
        """Ids of star-center nodes (nodes with no assigned input vertices)."""
        n = self.graph.vertex_count
        used = np.zeros(n, bool)
        if self.assignment.size:
            used[self.assignment] = True
        return np.flatnonzero(~used)

    def leaf_count(self) -> int:
        return int(np.count_nonzero(self.graph.degrees() == 1))

    def branch_count(self) -> int:
        return int(np.count_nonzero(self.graph.degrees() >= 3))


# ---- maximisation ----------------------------------------------------------

def maximize_separators(graph: SpatialGraph,
                        packed: PackedSeparators) -> np.ndarray:
    """Assign every vertex to its nearest separator along graph edges.

    Multi-source shortest paths with Euclidean edge lengths; sources are the
    separator vertices, labelled by their separator's position in
    ``packed.chosen``. Distance ties go to the lower separator id. Vertices
    unreachable from any separator keep the label -1 (orphans); callers decide
    how to absorb them.
    """
    n = graph.vertex_count
    dist = np.full(n, np.inf)
    label = np.full(n, -1, np.int64)
    heap = []
    for i, sep in enumerate(packed.chosen):
        for v in sep.vertices:
            v = int(v)
            if not (0 <= v < n):
                raise ValueError("separator vertex out of range")
            dist[v] = 0.0
            label[v] = i
            heap.append((0.0, i, v))
    heapq.heapify(heap)
    pos = graph.positions
    while heap:
        d, l, v = heapq.heappop(heap)
        if d != dist[v] or l != label[v]:
            continue
        for w in graph.neighbors(v):
            w = int(w)
            dv = pos[v] - pos[w]
            nd = d + float(np.sqrt(np.dot(dv, dv)))
            if nd < dist[w] or (nd == dist[w] and l < label[w]):
                dist[w] = nd
                label[w] = l
                heapq.heappush(heap, (nd, l, w))
    return label


def absorb_orphans(graph: SpatialGraph, label: np.ndarray) -> np.ndarray:
    """Give each connected component of unlabelled vertices its own class.

    New classes are appended after the existing ones, ordered by smallest
    vertex id, so separator classes keep their ids.
    """
    orphans = np.flatnonzero(label < 0)
    if orphans.size == 0:
        return label
    label = label.copy()
    nxt = int(label.max()) + 1 if (label >= 0).any() else 0
    for comp in connected_components(graph, subset=orphans):
        label[comp] = nxt
        nxt += 1
    return label


# ---- quotient --------------------------------------------------------------

def quotient_graph(graph: SpatialGraph, assignment):
    """Collapse assignment classes to single nodes.

    Node ids follow ascending class label. Each node sits at the average
    position of its class; weight = class cardinality. An edge connects two
    nodes iff some input edge crosses their classes (duplicates collapse).
    Returns (graph, weights).
    """
    assignment = np.asarray(assignment, dtype=np.int64)
    if assignment.size != graph.vertex_count:
        raise ValueError("assignment must cover every vertex")
    if assignment.size and assignment.min() < 0:
        raise ValueError("assignment must be total (no negative labels)")
    classes, inverse = np.unique(assignment, return_inverse=True)
    c = classes.size
    counts = np.bincount(inverse, minlength=c).astype(np.float64)
    centers = np.zeros((c, 3))
    np.add.at(centers, inverse, graph.positions)
    centers /= counts[:, None]
    e = graph.edges()
    if e.size:
        qe = np.column_stack((inverse[e[:, 0]], inverse[e[:, 1]]))
        qe = qe[qe[:, 0] != qe[:, 1]]
    else:
        qe = np.empty((0, 2), np.int64)
    return SpatialGraph.from_edges(centers, qe), counts


# ---- clique-complex collapse -------------------------------------------------

def _triangles(graph: SpatialGraph) -> list:
    tris = []
    for u, v in graph.edges():
        common = np.intersect1d(graph.neighbors(u), graph.neighbors(v),
                                assume_unique=True)
        for w in common:
            if w > v:
                tris.append((int(u), int(v), int(w)))
    return tris


def collapse_clique_complexes(graph: SpatialGraph, weights):
    """Replace clusters of edge-sharing triangles by star graphs.

    Triangles sharing an edge merge transitively into one complex. For each
    complex, all of its triangle edges are deleted and a new star-center node
    (average position, mean weight of the complex vertices) is connected to
    every complex vertex. Star centers are appended after the existing nodes,
    one per complex, ordered by smallest member id. Returns (graph, weights).
    """
    weights = np.asarray(weights, dtype=np.float64)
    tris = _triangles(graph)
    if not tris:
        return graph, weights.copy()
    parent = list(range(len(tris)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    edge_owner = {}
    for t, (a, b, c) in enumerate(tris):
        for e in ((a, b), (a, c), (b, c)):
            o = edge_owner.get(e)
            if o is None:
                edge_owner[e] = t
            else:
                ra, rb = find(o), find(t)
                if ra != rb:
                    parent[rb] = ra
    complexes = {}
    for t, (a, b, c) in enumerate(tris):
        r = find(t)
        comp = complexes.setdefault(r, (set(), set()))
        comp[0].update((a, b, c))
        comp[1].update(((a, b), (a, c), (b, c)))
    ordered = sorted(complexes.values(), key=lambda comp: min(comp[0]))

    removed = set()
    for _, tri_edges in ordered:
        removed.update(tri_edges)
    kept = [e for e in map(lambda r: (int(r[0]), int(r[1])), graph.edges())
            if e not in removed]

    n = graph.vertex_count
    new_pos = [graph.positions]
    new_w = [weights]
    star_edges = []
    for i, (members, _) in enumerate(ordered):
        star = n + i
        mem = sorted(members)
        new_pos.append(graph.positions[mem].mean(axis=0)[None, :])
        new_w.append(np.array([weights[mem].mean()]))
        star_edges.extend((m, star) for m in mem)
    positions = np.vstack(new_pos)
    out = SpatialGraph.from_edges(positions, kept + star_edges)
    return out, np.concatenate(new_w)


# ---- smoothing and radii -----------------------------------------------------

def smooth_skeleton(skel: Skeleton, iterations: int) -> Skeleton:
    """Weighted Laplacian smoothing of node positions.

    Per iteration, simultaneously for every node v with degree d > 0:
    p_v <- p_v/d + (1 - 1/d) * weighted neighbour average, where neighbour u
    contributes with weight sqrt(W_u)/degree(u). Isolated nodes and node
    attributes are untouched; iterations=0 is the identity.
    """
    if iterations < 0:
        raise ValueError("iterations must be non-negative")
    g = skel.graph
    if iterations == 0 or g.vertex_count == 0:
        return replace(skel, graph=SpatialGraph(g.positions.copy(),
                                                g.indptr, g.indices))
    deg = g.degrees().astype(np.float64)
    src = np.repeat(np.arange(g.vertex_count, dtype=np.int64),
                    np.diff(g.indptr))
    dst = g.indices
    contrib = np.where(deg > 0, np.sqrt(np.maximum(skel.weights, 0.0)) / np.maximum(deg, 1.0), 0.0)
    pos = g.positions.copy()
    for _ in range(iterations):
        num = np.zeros_like(pos)
        den = np.zeros(g.vertex_count)
        np.add.at(num, src, contrib[dst, None] * pos[dst])
        np.add.at(den, src, contrib[dst])
        ok = (deg > 0) & (den > 0)
        avg = np.where(ok[:, None], num / np.where(den > 0, den, 1.0)[:, None],
                       pos)
        d = np.where(deg > 0, deg, 1.0)
        new = pos / d[:, None] + (1.0 - 1.0 / d[:, None]) * avg
        pos = np.where(ok[:, None], new, pos)
    return replace(skel, graph=SpatialGraph(pos, g.indptr, g.indices))


def annotate_radii(skel: Skeleton, graph: SpatialGraph) -> Skeleton:
    """Mean distance from each node to the input vertices it represents.

    Uses the node's current (possibly smoothed) position. Star centers, which
    represent no input vertices directly, get the mean radius of their
    neighbours.
    """
    c = skel.graph.vertex_count
    assignment = skel.assignment
    sums = np.zeros(c)
    counts = np.zeros(c)
    if assignment.size:
        d = graph.positions - skel.graph.positions[assignment]
        d = np.sqrt(np.einsum("ij,ij->i", d, d))
        np.add.at(sums, assignment, d)
        np.add.at(counts, assignment, 1.0)
    radii = np.divide(sums, counts, out=np.zeros(c), where=counts > 0)
    for v in np.flatnonzero(counts == 0):
        nbr = skel.graph.neighbors(int(v))
        nbr = nbr[counts[nbr] > 0]
        if nbr.size:
            radii[v] = float(radii[nbr].mean())
    return replace(skel, radii=radii)


# ---- full extraction ----------------------------------------------------------

def extract_skeleton(graph: SpatialGraph, packed: PackedSeparators,
                     position_mode: str = "class-average",
                     smooth_iters: int = 0) -> Skeleton:
    """Packed separators to finished skeleton.

    ``position_mode`` picks the pre-smoothing node positions: the average of
    the whole assignment class (default) or of the separator's own vertices
    ("separator-average"; orphan classes fall back to the class average).
    """
    if position_mode not in ("class-average", "separator-average"):
        raise ValueError("unknown position mode: %r" % (position_mode,))
    label = maximize_separators(graph, packed)
    label = absorb_orphans(graph, label)
    qgraph, weights = quotient_graph(graph, label)
    if position_mode == "separator-average":
        pos = qgraph.positions.copy()
        for i, sep in enumerate(packed.chosen):
            vs = sorted(sep.vertices)
            pos[i] = graph.positions[vs].mean(axis=0)
        qgraph = SpatialGraph(pos, qgraph.indptr, qgraph.indices)
    qgraph, weights = collapse_clique_complexes(qgraph, weights)
    skel = Skeleton(qgraph, weights, np.zeros(qgraph.vertex_count), label)
    skel = smooth_skeleton(skel, smooth_iters)
    return annotate_radii(skel, graph)
