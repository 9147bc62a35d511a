"""Independent checkers the production code is tested against.

Everything here is deliberately naive: dict-and-set BFS, brute-force loops,
no shared machinery with the package internals. Slow but obviously correct.
"""

import sys

import numpy as np

sys.setrecursionlimit(20000)


def adjacency(graph):
    return {v: set(int(w) for w in graph.neighbors(v))
            for v in range(graph.vertex_count)}


def reach(adj, starts, allowed):
    """Vertices reachable from ``starts`` walking only inside ``allowed``."""
    seen = set(s for s in starts if s in allowed)
    stack = list(seen)
    while stack:
        x = stack.pop()
        for w in adj[x]:
            if w in allowed and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def subset_components(adj, members):
    members = set(members)
    comps = []
    left = set(members)
    while left:
        comp = reach(adj, [min(left)], members)
        comps.append(frozenset(comp))
        left -= comp
    return sorted(comps, key=min)


def is_connected_subset(graph, vs):
    vs = set(int(v) for v in vs)
    if not vs:
        return False
    adj = adjacency(graph)
    return len(reach(adj, [min(vs)], vs)) == len(vs)


# ---- separator validity --------------------------------------------------------

def separator_disconnects(graph, sigma, fronts):
    """Restricted-BFS check: within sigma plus its fronts, every path from
    one front to another passes through sigma."""
    adj = adjacency(graph)
    sigma = set(int(v) for v in sigma)
    fsets = [set(int(v) for v in f) for f in fronts]
    if len(fsets) < 2:
        return False
    union = set()
    for f in fsets:
        if not f or (f & sigma) or (f & union):
            return False
        union |= f
    for i, f in enumerate(fsets):
        hit = reach(adj, f, union)
        for j, g in enumerate(fsets):
            if j != i and hit & g:
                return False
    return True


def brute_is_minimal(graph, sigma, fronts):
    """Every separator vertex must touch at least two front components,
    where the components are recomputed here from scratch."""
    adj = adjacency(graph)
    sigma = set(int(v) for v in sigma)
    region = set()
    for f in fronts:
        region |= set(int(v) for v in f)
    comps = subset_components(adj, region)
    for v in sigma:
        touched = set()
        for i, comp in enumerate(comps):
            if adj[v] & comp:
                touched.add(i)
        if len(touched) < 2:
            return False
    return True


def valid_separator(graph, sep):
    """Full validity for a found separator: connected, disconnecting,
    minimal. Leaf separators (one front) only need the leaf shape."""
    if not is_connected_subset(graph, sep.vertices):
        return False
    if len(sep.fronts) == 1:
        return len(sep.vertices) == 1 and sep.quality == 1.0
    return (separator_disconnects(graph, sep.vertices, sep.fronts)
            and brute_is_minimal(graph, sep.vertices, sep.fronts))


def sweep_separator_valid(graph, sep):
    """Validity for sweep-emitted separators: connected and disconnecting
    (they are thin contours, not necessarily minimal)."""
    return (is_connected_subset(graph, sep.vertices)
            and separator_disconnects(graph, sep.vertices, sep.fronts))


def pairwise_disjoint(sets):
    seen = set()
    for s in sets:
        s = set(s)
        if s & seen:
            return False
        seen |= s
    return True


def energy_brute(graph, sigma):
    sigma = set(int(v) for v in sigma)
    total = 0.0
    for v in sigma:
        for w in graph.neighbors(v):
            w = int(w)
            if w in sigma:
                total += float(np.linalg.norm(graph.positions[v]
                                              - graph.positions[w]))
    return total / 2.0


# ---- graph shape checks ---------------------------------------------------------

def betti_first(graph):
    adj = adjacency(graph)
    left = set(range(graph.vertex_count))
    ncomp = 0
    while left:
        comp = reach(adj, [min(left)], left)
        left -= comp
        ncomp += 1
    return graph.edge_count - graph.vertex_count + ncomp


def tree_canonical(graph):
    """AHU canonical form of a free tree, rooted at its center(s)."""
    n = graph.vertex_count
    adj = adjacency(graph)
    assert graph.edge_count == n - 1, "not a tree"
    if n == 1:
        return "()"
    deg = {v: len(adj[v]) for v in adj}
    leaves = [v for v in adj if deg[v] == 1]
    count = n
    while count > 2:
        count -= len(leaves)
        nxt = []
        for v in leaves:
            deg[v] = 0
            for w in adj[v]:
                if deg[w] > 1:
                    deg[w] -= 1
                    if deg[w] == 1:
                        nxt.append(w)
        leaves = nxt

    def canon(v, parent):
        subs = sorted(canon(w, v) for w in adj[v] if w != parent)
        return "(" + "".join(subs) + ")"

    return min(canon(c, -1) for c in leaves)


def trees_isomorphic(g1, g2):
    if g1.vertex_count != g2.vertex_count:
        return False
    d1 = sorted(int(d) for d in g1.degrees())
    d2 = sorted(int(d) for d in g2.degrees())
    if d1 != d2:
        return False
    return tree_canonical(g1) == tree_canonical(g2)


def isomorphic_by_positions(g1, g2, tol=1e-9):
    """Isomorphism when vertex positions are unique and preserved: match
    vertices geometrically and compare the induced edge sets."""
    if g1.vertex_count != g2.vertex_count:
        return False
    p1, p2 = g1.positions, g2.positions
    perm = np.full(g1.vertex_count, -1, np.int64)
    used = np.zeros(g2.vertex_count, bool)
    for v in range(g1.vertex_count):
        d = np.linalg.norm(p2 - p1[v], axis=1)
        j = int(np.argmin(d))
        if d[j] > tol or used[j]:
            return False
        perm[v] = j
        used[j] = True
    e1 = {(min(int(perm[u]), int(perm[w])), max(int(perm[u]), int(perm[w])))
          for u, w in g1.edges()}
    e2 = {(int(u), int(w)) for u, w in g2.edges()}
    return e1 == e2


# ---- small algorithm oracles ----------------------------------------------------

def knn_edges_brute(points, k, radius):
    """Mutual-ised k-nearest-within-radius edges, by full pairwise scan."""
    points = np.asarray(points, float)
    n = len(points)
    chosen = set()
    for i in range(n):
        d = np.linalg.norm(points - points[i], axis=1)
        order = sorted((float(d[j]), j) for j in range(n) if j != i)
        picked = 0
        for dist, j in order:
            if picked >= k:
                break
            if dist <= radius:
                chosen.add((min(i, j), max(i, j)))
                picked += 1
    return chosen


def nearest_source_labels(graph, source_sets):
    """Multi-source shortest path labels by exhaustive relaxation, with
    (distance, label) lexicographic comparison."""
    n = graph.vertex_count
    best = {v: (np.inf, np.inf) for v in range(n)}
    for i, src in enumerate(source_sets):
        for v in src:
            best[int(v)] = (0.0, i)
    changed = True
    while changed:
        changed = False
        for u, w in graph.edges():
            u, w = int(u), int(w)
            d = float(np.linalg.norm(graph.positions[u] - graph.positions[w]))
            for a, b in ((u, w), (w, u)):
                cand = (best[a][0] + d, best[a][1])
                if cand < best[b]:
                    best[b] = cand
                    changed = True
    return np.array([best[v][1] if np.isfinite(best[v][0]) else -1
                     for v in range(n)], np.int64)


def ring_mean_radius(positions, center):
    d = np.linalg.norm(np.asarray(positions, float) - np.asarray(center, float),
                       axis=1)
    return float(d.mean())
