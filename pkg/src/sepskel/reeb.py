"""Separators from scalar-field sweeps.

An alternative way to produce local separators: project vertex positions onto
an axis, smooth the resulting scalar, then sweep a wavefront from the field's
minima upwards. The wavefront Q always separates the frozen (visited) region
from the unvisited one, so snapshots of its connected components are valid
separators. They can be packed and skeletonised exactly like grown ones, or
blended with them by concatenating the sets before packing.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .graph import SpatialGraph
from .separators import Separator, SeparatorSet


@dataclass
class HeightField:
    """A scalar per vertex of the graph the sweep will run on."""
    values: np.ndarray


def axis_height(graph: SpatialGraph, axis, smooth_iters: int = 10) -> HeightField:
    """Project positions onto an axis and diffuse the scalar a little.

    Each smoothing round replaces h(v) by the average of h(v) and the mean of
    its neighbours' values; isolated vertices keep their projection.
    """
    axis = np.asarray(axis, dtype=np.float64).reshape(3)
    norm = float(np.sqrt(np.dot(axis, axis)))
    if norm == 0.0:
        raise ValueError("axis must be nonzero")
    if smooth_iters < 0:
        raise ValueError("smooth_iters must be non-negative")
    h = graph.positions @ (axis / norm)
    n = graph.vertex_count
    deg = graph.degrees().astype(np.float64)
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(graph.indptr))
    for _ in range(smooth_iters):
        s = np.zeros(n)
        np.add.at(s, src, h[graph.indices])
        mean = np.divide(s, deg, out=h.copy(), where=deg > 0)
        h = 0.5 * h + 0.5 * mean
    return HeightField(h)


def sweep_separators(graph: SpatialGraph, h: HeightField) -> SeparatorSet:
    """Sweep the field from its minima and emit wavefront snapshots.

    The minima (h(v) <= h(u) for every neighbour u, so plateaus count) start
    frozen; the wavefront Q holds their unvisited neighbours. Each step
    freezes the lowest-(h, id) wavefront vertex and inserts its unvisited
    neighbours. Before every freeze, each connected component of Q is emitted
    as a separator if it has fully turned over since the last emission in its
    region (contains no vertex of an earlier emitted snapshot, nor one
    inserted while dismantling an emitted snapshot) and it actually separates:
    both its frozen-adjacent and unvisited-adjacent neighbour sets are
    nonempty. Those two sets act as the fronts, and their size ratio is the
    quality. Emitted separators are pairwise disjoint.
    """
    n = graph.vertex_count
    hv = np.asarray(h.values, dtype=np.float64).reshape(-1)
    if hv.size != n:
        raise ValueError("height field does not match the graph")
    UNSEEN, WAVE, FROZEN = 0, 1, 2
    state = np.zeros(n, np.int8)
    emitted = np.zeros(n, bool)
    blocked = np.zeros(n, bool)
    heap = []
    for v in range(n):
        nbr = graph.neighbors(v)
        if nbr.size == 0 or hv[v] <= hv[nbr].min():
            state[v] = FROZEN
    for v in np.flatnonzero(state == FROZEN):
        for u in graph.neighbors(int(v)):
            u = int(u)
            if state[u] == UNSEEN:
                state[u] = WAVE
                heapq.heappush(heap, (hv[u], u))
    pos = graph.positions
    out = []

    def wave_components():
        members = np.flatnonzero(state == WAVE)
        seen = set()
        comps = []
        for v in members:
            v = int(v)
            if v in seen:
                continue
            comp = [v]
            seen.add(v)
            stack = [v]
            while stack:
                x = stack.pop()
                for w in graph.neighbors(x):
                    w = int(w)
                    if state[w] == WAVE and w not in seen:
                        seen.add(w)
                        comp.append(w)
                        stack.append(w)
            comps.append(comp)
        return comps

    def try_emit(comp):
        if any(emitted[v] or blocked[v] for v in comp):
            return
        frozen_side = set()
        unseen_side = set()
        for v in comp:
            for w in graph.neighbors(v):
                w = int(w)
                if state[w] == FROZEN:
                    frozen_side.add(w)
                elif state[w] == UNSEEN:
                    unseen_side.add(w)
        if not frozen_side or not unseen_side:
            return
        sizes = (len(frozen_side), len(unseen_side))
        pts = pos[sorted(comp)]
        center = pts.mean(axis=0)
        radius = float(np.sqrt(((pts - center) ** 2).sum(axis=1).max()))
        fronts = tuple(sorted((frozenset(frozen_side), frozenset(unseen_side)),
                              key=min))
        out.append(Separator(frozenset(comp), min(sizes) / max(sizes),
                             center, radius, fronts))
        for v in comp:
            emitted[v] = True

    while heap:
        for comp in wave_components():
            try_emit(comp)
        hval, v = heapq.heappop(heap)
        if state[v] != WAVE:
            continue
        state[v] = FROZEN
        taint = bool(emitted[v])
        for u in graph.neighbors(v):
            u = int(u)
            if state[u] == UNSEEN:
                state[u] = WAVE
                blocked[u] |= taint
                heapq.heappush(heap, (hv[u], u))
    return SeparatorSet(out, n)
