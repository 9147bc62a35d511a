"""Spatially embedded undirected graphs and the shared structural operations.

The graph is the common currency of the whole pipeline: meshes, voxel grids and
point clouds are all turned into a ``SpatialGraph`` before anything else
happens, and the extracted skeleton is again a ``SpatialGraph`` plus per-vertex
attributes. Adjacency lives in CSR arrays (sorted rows, symmetric, no self
loops) and instances are treated as immutable: every mutating operation builds
and returns a new graph.
"""

from __future__ import annotations

import heapq
import math

import numpy as np

from . import _kernels


class SpatialGraph:
    """Undirected graph with a 3D position per vertex.

    Parameters
    ----------
    positions : (n, 3) float array
        One row per vertex. Vertex ids are the row indices.
    indptr, indices : int64 arrays
        CSR adjacency. Rows must be sorted, symmetric and free of self loops;
        use :meth:`from_edges` unless the arrays are already in that shape.
    """

    __slots__ = ("positions", "indptr", "indices")

    def __init__(self, positions, indptr, indices):
        self.positions = np.ascontiguousarray(positions, dtype=np.float64)
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(indices, dtype=np.int64)
        if self.positions.ndim != 2 or self.positions.shape[1] != 3:
            raise ValueError("positions must be an (n, 3) array")
        if self.indptr.size != self.positions.shape[0] + 1:
            raise ValueError("indptr size does not match vertex count")

    # ---- construction ----------------------------------------------------

    @classmethod
    def from_edges(cls, positions, edges):
        """Build a graph from an edge list, deduplicating and symmetrising.

        Self loops are discarded. Vertex ids outside ``[0, n)`` raise.
        """
        positions = np.ascontiguousarray(positions, dtype=np.float64)
        n = positions.shape[0]
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size:
            if e.min() < 0 or e.max() >= n:
                raise ValueError("edge endpoint out of range")
            e = e[e[:, 0] != e[:, 1]]
        if e.size:
            und = np.vstack((e, e[:, ::-1]))
            und = np.unique(und, axis=0)
            counts = np.bincount(und[:, 0], minlength=n)
            indptr = np.zeros(n + 1, np.int64)
            np.cumsum(counts, out=indptr[1:])
            indices = und[:, 1].copy()
        else:
            indptr = np.zeros(n + 1, np.int64)
            indices = np.empty(0, np.int64)
        return cls(positions, indptr, indices)

    # ---- queries -----------------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return self.positions.shape[0]

    @property
    def edge_count(self) -> int:
        return self.indices.size // 2

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        i = np.searchsorted(row, v)
        return bool(i < row.size and row[i] == v)

    def edges(self) -> np.ndarray:
        """All edges as an (m, 2) array with u < v, lexicographically sorted."""
        src = np.repeat(np.arange(self.vertex_count, dtype=np.int64),
                        np.diff(self.indptr))
        keep = src < self.indices
        return np.column_stack((src[keep], self.indices[keep]))

    def bbox_diagonal(self) -> float:
        if self.vertex_count == 0:
            return 0.0
        span = self.positions.max(axis=0) - self.positions.min(axis=0)
        return float(np.sqrt(np.dot(span, span)))

    def epsilon(self) -> float:
        """Degeneracy guard used by all geometric denominators.

        Scales with the bounding box diagonal; a coincident-everything graph
        falls back to an absolute tiny value so weights stay finite.
        """
        d = self.bbox_diagonal()
        return 1e-12 * d if d > 0.0 else 1e-12


# ---- connectivity ----------------------------------------------------------

def connected_components(graph: SpatialGraph, subset=None) -> list[np.ndarray]:
    """Connected components of the graph or of an induced subgraph.

    Returns sorted vertex arrays, ordered by their smallest vertex id.
    """
    if subset is None:
        members = np.arange(graph.vertex_count, dtype=np.int64)
    else:
        members = np.unique(np.asarray(list(subset), dtype=np.int64))
        if members.size and (members[0] < 0 or members[-1] >= graph.vertex_count):
            raise ValueError("subset vertex out of range")
    if members.size == 0:
        return []
    n = graph.vertex_count
    mark = np.zeros(n, np.int64)
    cid = np.empty(n, np.int64)
    queue = np.empty(n, np.int64)
    epoch = np.zeros(1, np.int64)
    labels, ncomp = _kernels.subset_component_labels(
        graph.indptr, graph.indices, members, mark, cid, queue, epoch)
    return [members[labels == c] for c in range(ncomp)]


# ---- saturation -------------------------------------------------------------

def saturate(graph: SpatialGraph, k: int, radius: float | None = None) -> SpatialGraph:
    """Connect every vertex pair within ``k`` hops, optionally capped by distance.

    The radius cap applies to all resulting edges, including original ones,
    so ``k=1`` with a radius prunes edges longer than the radius. ``k=1``
    without a radius is the identity.
    """
    if int(k) != k or k < 1:
        raise ValueError("saturation level must be a positive integer")
    if radius is not None and radius <= 0:
        raise ValueError("saturation radius must be positive")
    if k == 1 and radius is None:
        return graph
    r = -1.0 if radius is None else float(radius)
    src, dst = _kernels.khop_pairs(graph.indptr, graph.indices, graph.positions,
                                   int(k), r)
    return SpatialGraph.from_edges(graph.positions,
                                   np.column_stack((src, dst)))


# ---- contraction ------------------------------------------------------------

def simplify_contract(graph: SpatialGraph, target_fraction: float):
    """Coarsen by repeatedly contracting the globally shortest edge.

    Each contraction merges the two endpoint clusters into one vertex at the
    centroid of all input vertices merged so far, and re-keys the incident
    edges with the moved centroid distances. Equal lengths contract in order
    of the lexicographically smallest (min cluster id, max cluster id) pair,
    where a cluster id is the smallest input vertex it contains. Stops once
    the vertex count reaches ``floor(target_fraction * n)`` (at least 1) or
    no edges remain.

    Returns (graph, mapping) where mapping[input_vertex] = output vertex id.
    """
    if not (0.0 < target_fraction <= 1.0):
        raise ValueError("target_fraction must be in (0, 1]")
    n = graph.vertex_count
    if n == 0:
        return graph, np.empty(0, np.int64)
    target = max(1, int(target_fraction * n + 1e-9))
    if target >= n:
        return graph, np.arange(n, dtype=np.int64)

    parent = np.arange(n, dtype=np.int64)

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    pos_sum = graph.positions.copy()
    count = np.ones(n, np.int64)
    min_id = np.arange(n, dtype=np.int64)
    adj: dict[int, set[int]] = {v: set() for v in range(n)}
    for u, v in graph.edges():
        adj[int(u)].add(int(v))
        adj[int(v)].add(int(u))

    def centroid(root: int) -> np.ndarray:
        return pos_sum[root] / count[root]

    def key(a: int, b: int):
        d = centroid(a) - centroid(b)
        lo, hi = sorted((int(min_id[a]), int(min_id[b])))
        return (float(math.sqrt(float(np.dot(d, d)))), lo, hi)

    heap = []
    for u, v in graph.edges():
        heap.append(key(int(u), int(v)) + (int(u), int(v)))
    heapq.heapify(heap)

    alive = n
    while alive > target and heap:
        length, lo, hi, u, v = heapq.heappop(heap)
        ru, rv = find(u), find(v)
        if ru == rv:
            continue
        cur = key(ru, rv)
        if (cur[1], cur[2]) != (lo, hi) or cur[0] != length:
            # stale entry: one endpoint merged or moved since the push
            if rv in adj[ru]:
                heapq.heappush(heap, cur + (ru, rv))
            continue
        # contract rv into ru
        keep, gone = (ru, rv) if min_id[ru] <= min_id[rv] else (rv, ru)
        parent[gone] = keep
        pos_sum[keep] += pos_sum[gone]
        count[keep] += count[gone]
        min_id[keep] = min(min_id[keep], min_id[gone])
        nbrs = (adj[keep] | adj[gone]) - {keep, gone}
        for x in adj[gone]:
            adj[x].discard(gone)
        for x in adj[keep]:
            adj[x].discard(keep)
        adj[keep] = nbrs
        del adj[gone]
        for x in nbrs:
            adj[x].add(keep)
            heapq.heappush(heap, key(keep, x) + (keep, x))
        alive -= 1

    roots = sorted(adj.keys(), key=lambda r: int(min_id[r]))
    new_id = {r: i for i, r in enumerate(roots)}
    positions = np.array([centroid(r) for r in roots], dtype=np.float64)
    edges = []
    for r in roots:
        for x in adj[r]:
            if new_id[r] < new_id[x]:
                edges.append((new_id[r], new_id[x]))
    mapping = np.empty(n, np.int64)
    for v in range(n):
        mapping[v] = new_id[find(v)]
    out = SpatialGraph.from_edges(positions,
                                  np.asarray(edges, np.int64).reshape(-1, 2))
    return out, mapping


# ---- position smoothing ------------------------------------------------------

def smooth_positions(graph: SpatialGraph, movable, iterations: int) -> np.ndarray:
    """Jacobi smoothing of vertex positions with inverse-edge-length weights.

    Each iteration moves every movable vertex to the weighted average of its
    neighbours' previous positions, weights 1/(length + eps). Vertices outside
    ``movable`` and isolated vertices stay put. Returns a new positions array.
    """
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    n = graph.vertex_count
    mask = np.zeros(n, bool)
    mask[np.asarray(list(movable), dtype=np.int64)] = True
    P = graph.positions.copy()
    if iterations == 0 or not mask.any() or graph.indices.size == 0:
        return P
    eps = graph.epsilon()
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(graph.indptr))
    dst = graph.indices
    sel = mask[src]
    src_m = src[sel]
    dst_m = dst[sel]
    for _ in range(iterations):
        d = np.linalg.norm(P[src_m] - P[dst_m], axis=1)
        w = 1.0 / (d + eps)
        num = np.zeros((n, 3))
        den = np.zeros(n)
        np.add.at(num, src_m, w[:, None] * P[dst_m])
        np.add.at(den, src_m, w)
        upd = mask & (den > 0)
        newP = P.copy()
        newP[upd] = num[upd] / den[upd, None]
        P = newP
    return P
