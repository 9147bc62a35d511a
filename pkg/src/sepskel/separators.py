"""Local vertex separators: growth, shrinking, optimisation and sampling.

A separator here is a connected vertex set whose removal locally disconnects
the graph: growing a region from a seed vertex, guided by a slowly inflating
bounding sphere, until the boundary front falls apart into two or more
sufficiently balanced components. The grown region is then shrunk to a minimal
separator, optionally tightened by energy-descent swaps, and harvested over
the whole graph by randomised sampling that avoids re-finding the same
separator over and over.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .graph import SpatialGraph

_MASK64 = 0xFFFFFFFFFFFFFFFF
_PERM_STREAM = np.uint64(0x70657276697369)
_OPT_STREAM = np.uint64(0x73776170737472)


@dataclass(eq=False)
class Separator:
    """A minimal local separator with its bookkeeping.

    ``fronts`` holds the front components at growth termination, grown by the
    vertices absorbed while shrinking; they are pairwise disjoint and disjoint
    from ``vertices``. ``grown`` retains the pre-shrink region for the
    optimisation step and is not serialised.
    """
    vertices: frozenset
    quality: float
    center: np.ndarray
    radius: float
    fronts: tuple
    grown: frozenset | None = field(default=None, repr=False)


@dataclass
class SeparatorSet:
    separators: list
    source_graph_size: int


class Workspace:
    """Per-thread scratch arrays shared by the growth kernels."""

    def __init__(self, n: int):
        self.mark = np.zeros(n, np.int64)
        self.kind = np.zeros(n, np.int8)
        self.cid = np.empty(n, np.int64)
        self.lidx = np.empty(n, np.int64)
        self.queue = np.empty(n, np.int64)
        self.sigma = np.empty(n, np.int64)
        self.front = np.empty(n, np.int64)
        self.epoch = np.zeros(1, np.int64)


# ---- basic predicates -----------------------------------------------------------

def front_size_ratio(components) -> float:
    """Smallest over largest component size; 1.0 for a single component."""
    comps = list(components)
    if not comps:
        raise ValueError("no front components")
    sizes = [len(c) for c in comps]
    if min(sizes) == 0:
        raise ValueError("empty front component")
    return min(sizes) / max(sizes)


def is_minimal_separator(graph: SpatialGraph, sigma, fronts) -> bool:
    """True iff every separator vertex touches at least two front components."""
    label = {}
    for i, f in enumerate(fronts):
        for v in f:
            label[int(v)] = i
    for v in sigma:
        seen = -1
        ok = False
        for w in graph.neighbors(int(v)):
            l = label.get(int(w))
            if l is None:
                continue
            if seen == -1:
                seen = l
            elif l != seen:
                ok = True
                break
        if not ok:
            return False
    return True


def separator_energy(graph: SpatialGraph, sigma) -> float:
    """Total length of edges induced by the separator."""
    s = {int(v) for v in sigma}
    pos = graph.positions
    e = 0.0
    for v in s:
        for w in graph.neighbors(v):
            w = int(w)
            if w in s and w > v:
                d = pos[v] - pos[w]
                e += float(np.sqrt(np.dot(d, d)))
    return e


# ---- growth and shrinking ----------------------------------------------------------

def find_separator(graph: SpatialGraph, v0: int, tau: float,
                   workspace: Workspace | None = None) -> Separator | None:
    """Grow, shrink and validate a local separator seeded at ``v0``.

    Returns None when the front floods the whole component (no separator
    exists at this seed) or the shrunk set falls apart. A degree-1 seed is
    returned directly as a quality-1 leaf separator so that re-running the
    pipeline on its own output reproduces it.
    """
    n = graph.vertex_count
    if not (0 <= v0 < n):
        raise ValueError("seed vertex out of range")
    ws = workspace if workspace is not None else Workspace(n)
    eps = graph.epsilon()
    status, sig, fr, lab, nf, cx, cy, cz, r, q = _kernels.grow_separator(
        graph.indptr, graph.indices, graph.positions, int(v0), float(tau), eps,
        ws.mark, ws.kind, ws.cid, ws.queue, ws.sigma, ws.front, ws.epoch)
    if status == 0:
        return None
    if status == 1:
        return Separator(frozenset((int(v0),)), 1.0, graph.positions[v0].copy(),
                         0.0, (frozenset((int(fr[0]),)),),
                         grown=frozenset((int(v0),)))
    sig2, fr2, lab2 = _kernels.shrink_separator_kernel(
        graph.indptr, graph.indices, graph.positions, sig, fr, lab,
        cx, cy, cz, eps, ws.mark, ws.kind, ws.cid, ws.lidx, ws.queue, ws.epoch)
    if sig2.size == 0:
        return None
    members = np.sort(sig2)
    _, ncomp = _kernels.subset_component_labels(
        graph.indptr, graph.indices, members, ws.mark, ws.cid, ws.queue, ws.epoch)
    if ncomp != 1:
        return None
    fronts = _group_fronts(fr2, lab2, int(nf))
    return Separator(frozenset(int(v) for v in sig2), float(q),
                     np.array([cx, cy, cz]), float(r), fronts,
                     grown=frozenset(int(v) for v in sig))


def _group_fronts(front_arr, label_arr, nfronts) -> tuple:
    groups = [[] for _ in range(nfronts)]
    for v, l in zip(front_arr, label_arr):
        groups[int(l)].append(int(v))
    fronts = [frozenset(g) for g in groups if g]
    fronts.sort(key=min)
    return tuple(fronts)


def local_separator(graph: SpatialGraph, v0: int, tau: float):
    """Quality and vertex set of the separator grown at ``v0``.

    (0.0, empty set) when no separator exists at this seed.
    """
    sep = find_separator(graph, v0, tau)
    if sep is None:
        return 0.0, frozenset()
    return sep.quality, sep.vertices


def shrink_separator(graph: SpatialGraph, sigma, fronts, center):
    """Shrink ``sigma`` to a minimal separator of the given fronts.

    Absorbed vertices join the single front component they touch; the front
    count is preserved and the input front order is kept in the result.
    Returns (sigma, fronts).
    """
    sigma_arr = np.fromiter(sorted(int(v) for v in sigma), np.int64)
    fv = []
    fl = []
    for i, f in enumerate(fronts):
        for v in sorted(int(x) for x in f):
            fv.append(v)
            fl.append(i)
    ws = Workspace(graph.vertex_count)
    c = np.asarray(center, dtype=np.float64)
    sig2, fr2, lab2 = _kernels.shrink_separator_kernel(
        graph.indptr, graph.indices, graph.positions, sigma_arr,
        np.asarray(fv, np.int64), np.asarray(fl, np.int64),
        float(c[0]), float(c[1]), float(c[2]), graph.epsilon(),
        ws.mark, ws.kind, ws.cid, ws.lidx, ws.queue, ws.epoch)
    out_fronts = [set() for _ in fronts]
    for v, l in zip(fr2, lab2):
        out_fronts[int(l)].add(int(v))
    return frozenset(int(v) for v in sig2), tuple(frozenset(f) for f in out_fronts)


# ---- optimisation ---------------------------------------------------------------

def _components_of(graph: SpatialGraph, vs) -> list:
    """Components of a vertex set, ordered by smallest member."""
    vs = set(vs)
    comps = []
    seen = set()
    for v in sorted(vs):
        if v in seen:
            continue
        comp = [v]
        seen.add(v)
        stack = [v]
        while stack:
            x = stack.pop()
            for w in graph.neighbors(x):
                w = int(w)
                if w in vs and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(frozenset(comp))
    return comps


def _set_connected(graph: SpatialGraph, vs) -> bool:
    vs = set(vs)
    if not vs:
        return False
    start = min(vs)
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for w in graph.neighbors(x):
            w = int(w)
            if w in vs and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vs)


def optimize_separator(graph: SpatialGraph, sigma, fronts, original,
                       rng_seed: int = 0) -> frozenset:
    """Reduce separator edge length by swapping boundary vertices.

    A swap replaces v in the separator by a neighbour u from the original
    grown region when u's front component touches v only through u and both
    have the same separator neighbourhood; each applied swap is re-checked to
    still be a connected minimal separator. Greedy descent is followed by four
    seeded perturb-and-retry rounds that keep only strict improvements, so the
    result never has higher energy than the input.
    """
    out, _ = _optimize_full(graph, sigma, fronts, original, rng_seed)
    return out


def _optimize_full(graph: SpatialGraph, sigma, fronts, original, rng_seed: int):
    sigma0 = frozenset(int(v) for v in sigma)
    original = frozenset(int(v) for v in original)
    if not sigma0 <= original:
        raise ValueError("original region must contain the separator")
    region = set(sigma0)
    for f in fronts:
        region.update(int(v) for v in f)
    pos = graph.positions

    def front_comps(sig):
        return _components_of(graph, region - sig)

    def label_of(comps):
        return {v: i for i, c in enumerate(comps) for v in c}

    def valid(sig, comps):
        if len(comps) < 2 or not _set_connected(graph, sig):
            return False
        return is_minimal_separator(graph, sig, comps)

    def energy(sig):
        return separator_energy(graph, sig)

    def legal_swaps(sig, comps):
        label = label_of(comps)
        out = []
        for v in sorted(sig):
            nv = [int(w) for w in graph.neighbors(v)]
            sig_nv = frozenset(w for w in nv if w in sig)
            for u in nv:
                if u in sig or u not in original or u not in label:
                    continue
                lu = label[u]
                if any(w != u and label.get(w) == lu for w in nv):
                    continue  # a second path into u's component would tunnel
                sig_nu = frozenset(int(w) for w in graph.neighbors(u)
                                   if int(w) in sig)
                if sig_nu - {v} != sig_nv:
                    continue
                delta = 0.0
                for w in sig_nv:
                    du = pos[u] - pos[w]
                    dv = pos[v] - pos[w]
                    delta += float(np.sqrt(np.dot(du, du))) - \
                        float(np.sqrt(np.dot(dv, dv)))
                out.append((v, u, delta))
        return out

    def apply_if_valid(sig, v, u):
        cand = set(sig)
        cand.discard(v)
        cand.add(u)
        ccomps = front_comps(cand)
        if not valid(cand, ccomps):
            return None
        return frozenset(cand), ccomps

    def descend(sig, comps):
        guard = 50 * max(1, len(sig))
        while guard > 0:
            guard -= 1
            step = None
            for v, u, delta in legal_swaps(sig, comps):
                if delta < 0.0:
                    step = apply_if_valid(sig, v, u)
                    if step is not None:
                        break
            if step is None:
                break
            sig, comps = step
        return sig, comps

    comps0 = front_comps(sigma0)
    best, best_comps = descend(sigma0, comps0)
    best_e = energy(best)
    rng = np.random.Generator(np.random.Philox(
        key=np.array([np.uint64(rng_seed & _MASK64), _OPT_STREAM], np.uint64)))
    for _ in range(4):
        cand, ccomps = best, best_comps
        for _ in range(min(4, len(cand))):
            swaps = legal_swaps(cand, ccomps)
            applied = None
            if swaps:
                for i in rng.permutation(len(swaps)):
                    v, u, _ = swaps[int(i)]
                    applied = apply_if_valid(cand, v, u)
                    if applied is not None:
                        break
            if applied is None:
                break
            cand, ccomps = applied
        cand, ccomps = descend(cand, ccomps)
        e = energy(cand)
        if e < best_e:
            best, best_comps, best_e = cand, ccomps, e
    return best, tuple(best_comps)


# ---- sampling -------------------------------------------------------------------

def sample_separators(graph: SpatialGraph, tau: float = 0.0875,
                      optimize: bool = False, rng_seed: int = 0,
                      threads: int = 1) -> SeparatorSet:
    """Harvest separators over the whole graph.

    Vertices are visited in a seeded random order; a growth is launched from v
    with probability 2**-count(v), where count(v) is the number of already
    found separators containing v, so well-covered regions stop spawning
    searches. Per-vertex randomness comes from counter-based streams keyed by
    (seed, vertex), which makes the threads=1 run a pure function of
    (graph, tau, seed). With more threads, count reads are unsynchronised;
    stale reads can only over-sample.
    """
    n = graph.vertex_count
    if n == 0:
        return SeparatorSet([], 0)
    if not (0.0 <= tau <= 1.0):
        raise ValueError("tau must be in [0, 1]")
    seed = np.uint64(int(rng_seed) & _MASK64)
    rng = np.random.Generator(np.random.Philox(
        key=np.array([seed, _PERM_STREAM], np.uint64)))
    perm = rng.permutation(n)
    counts = np.zeros(n, np.int64)
    results: list[Separator] = []
    lock = threading.Lock()

    def visit(v: int, ws: Workspace):
        c = int(counts[v])
        if c > 0:
            u = np.random.Generator(np.random.Philox(
                key=np.array([seed, np.uint64(v)], np.uint64))).random()
            if u >= 2.0 ** (-c):
                return
        sep = find_separator(graph, v, tau, ws)
        if sep is None:
            return
        if optimize and sep.grown is not None and len(sep.fronts) >= 2:
            mix = (int(seed) ^ (v * 0x9E3779B97F4A7C15)) & _MASK64
            vs, fr = _optimize_full(graph, sep.vertices, sep.fronts,
                                    sep.grown, mix)
            sep = replace(sep, vertices=vs, fronts=fr)
        with lock:
            results.append(sep)
            for w in sep.vertices:
                counts[w] += 1

    if threads <= 1:
        ws = Workspace(n)
        for v in perm:
            visit(int(v), ws)
    else:
        tls = threading.local()

        def worker(v):
            ws = getattr(tls, "ws", None)
            if ws is None:
                ws = tls.ws = Workspace(n)
            visit(int(v), ws)

        with ThreadPoolExecutor(max_workers=threads) as ex:
            chunk = max(1, n // (threads * 8))
            list(ex.map(worker, perm, chunksize=chunk))
    return SeparatorSet(results, n)
