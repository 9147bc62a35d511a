"""Greedy weighted packing of overlapping separators.

Every graph vertex may end up in at most one chosen separator. Separators are
ranked by how much they overlap the rest of the crop, discounted by their
balance quality, and accepted greedily while disjoint from everything chosen
before them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .separators import SeparatorSet


@dataclass
class PackedSeparators:
    """Pairwise-disjoint selection, in acceptance order."""
    chosen: list
    rejected_count: int


def redundancy_counts(sep_set: SeparatorSet) -> np.ndarray:
    """redundancy(i) = sum over j != i of the overlap |S_i & S_j|.

    Computed through a per-vertex occupancy table: a vertex occurring in m
    separators contributes m - 1 to each of them, which is the same sum
    without touching every pair.
    """
    seps = sep_set.separators
    n = sep_set.source_graph_size
    occ = np.zeros(n, np.int64)
    for s in seps:
        for v in s.vertices:
            v = int(v)
            if not (0 <= v < n):
                raise ValueError("separator vertex out of range")
            occ[v] += 1
    red = np.zeros(len(seps), np.int64)
    for i, s in enumerate(seps):
        red[i] = sum(occ[int(v)] - 1 for v in s.vertices)
    return red


def redundancy_counts_allpairs(sep_set: SeparatorSet) -> np.ndarray:
    """Quadratic reference implementation kept for cross-checking."""
    seps = sep_set.separators
    red = np.zeros(len(seps), np.int64)
    for i, a in enumerate(seps):
        for j, b in enumerate(seps):
            if i != j:
                red[i] += len(a.vertices & b.vertices)
    return red


def pack_separators(sep_set: SeparatorSet) -> PackedSeparators:
    """Select a disjoint subset, favouring low redundancy and high quality.

    Candidates are scanned in ascending (redundancy/quality, |S|, index)
    order and accepted whenever they share no vertex with the accepted set.
    Deterministic; the chosen list keeps acceptance order.
    """
    seps = sep_set.separators
    if not seps:
        return PackedSeparators([], 0)
    red = redundancy_counts(sep_set)
    order = sorted(range(len(seps)),
                   key=lambda i: (red[i] / seps[i].quality,
                                  len(seps[i].vertices), i))
    taken = np.zeros(sep_set.source_graph_size, bool)
    chosen = []
    for i in order:
        vs = [int(v) for v in seps[i].vertices]
        if taken[vs].any():
            continue
        taken[vs] = True
        chosen.append(seps[i])
    return PackedSeparators(chosen, len(seps) - len(chosen))
