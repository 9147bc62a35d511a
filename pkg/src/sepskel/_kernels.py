"""Compiled inner loops.

Everything here is numba-jitted with ``nogil`` so the sampling driver can run
several growth searches in parallel from Python threads. Kernels share a set of
per-thread scratch arrays (see ``separators.Workspace``) and use a monotonically
increasing epoch counter instead of clearing arrays between calls: a vertex is
"marked" when its stamp equals the current epoch. That keeps per-call cost
proportional to the region touched, not to the whole graph.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

# kind codes for vertices of the current region (valid while mark[v] == epoch)
KIND_SIGMA = 1
KIND_FRONT = 2
KIND_DROPPED = 3


@njit(cache=True, nogil=True)
def subset_component_labels(indptr, indices, members, mark, cid, queue, epoch_box):
    """Label connected components of the subgraph induced by ``members``.

    Returns (labels, count) where labels[i] is the component of members[i].
    Components are numbered in first-touch order, so passing ``members`` in
    ascending order numbers them by smallest contained vertex.
    """
    epoch = epoch_box[0] + 1
    epoch_box[0] = epoch
    for i in range(members.size):
        v = members[i]
        mark[v] = epoch
        cid[v] = -1
    ncomp = 0
    for i in range(members.size):
        s = members[i]
        if cid[s] != -1:
            continue
        cid[s] = ncomp
        queue[0] = s
        head, tail = 0, 1
        while head < tail:
            u = queue[head]
            head += 1
            for t in range(indptr[u], indptr[u + 1]):
                w = indices[t]
                if mark[w] == epoch and cid[w] == -1:
                    cid[w] = ncomp
                    queue[tail] = w
                    tail += 1
        ncomp += 1
    labels = np.empty(members.size, np.int64)
    for i in range(members.size):
        labels[i] = cid[members[i]]
    return labels, ncomp


@njit(cache=True, nogil=True)
def _label_front(indptr, indices, mark, kind, cid, queue, front_buf, fcount, epoch):
    """Connected components of the current front. Returns (count, min, max) sizes."""
    for i in range(fcount):
        cid[front_buf[i]] = -1
    ncomp = 0
    minsz = np.int64(1) << 60
    maxsz = np.int64(0)
    for i in range(fcount):
        s = front_buf[i]
        if cid[s] != -1:
            continue
        cid[s] = ncomp
        queue[0] = s
        head, tail = 0, 1
        size = 0
        while head < tail:
            u = queue[head]
            head += 1
            size += 1
            for t in range(indptr[u], indptr[u + 1]):
                w = indices[t]
                if mark[w] == epoch and kind[w] == KIND_FRONT and cid[w] == -1:
                    cid[w] = ncomp
                    queue[tail] = w
                    tail += 1
        ncomp += 1
        if size < minsz:
            minsz = size
        if size > maxsz:
            maxsz = size
    return ncomp, minsz, maxsz


@njit(cache=True, nogil=True)
def grow_separator(indptr, indices, pos, v0, tau, eps,
                   mark, kind, cid, queue, sigma_buf, front_buf, epoch_box):
    """Region growth around ``v0`` until the front splits well enough.

    Returns (status, sigma, front, front_labels, nfronts, cx, cy, cz, r, q).
    status: 0 no separator (isolated vertex or front flooded the graph),
            1 leaf (single neighbour), 2 grown region ready for shrinking.
    ``sigma`` is in insertion order; ``front_labels[i]`` is the component of
    ``front[i]`` at termination.
    """
    epoch = epoch_box[0] + 1
    epoch_box[0] = epoch
    empty = np.empty(0, np.int64)

    mark[v0] = epoch
    kind[v0] = KIND_SIGMA
    sigma_buf[0] = v0
    scount = 1
    fcount = 0
    for t in range(indptr[v0], indptr[v0 + 1]):
        w = indices[t]
        if mark[w] != epoch:
            mark[w] = epoch
            kind[w] = KIND_FRONT
            front_buf[fcount] = w
            fcount += 1
    if fcount == 0:
        return 0, empty, empty, empty, 0, 0.0, 0.0, 0.0, 0.0, 0.0
    if fcount == 1:
        sig = sigma_buf[:1].copy()
        fr = front_buf[:1].copy()
        lab = np.zeros(1, np.int64)
        return 1, sig, fr, lab, 1, pos[v0, 0], pos[v0, 1], pos[v0, 2], 0.0, 1.0

    cx = pos[v0, 0]
    cy = pos[v0, 1]
    cz = pos[v0, 2]
    r = 0.0
    ncomp, minsz, maxsz = _label_front(indptr, indices, mark, kind, cid, queue,
                                       front_buf, fcount, epoch)
    while ncomp == 1 or (minsz / maxsz) < tau:
        # closest front vertex to the sphere centre, ties to the lowest id
        best = np.int64(-1)
        bestd = np.inf
        for i in range(fcount):
            f = front_buf[i]
            dx = cx - pos[f, 0]
            dy = cy - pos[f, 1]
            dz = cz - pos[f, 2]
            d = math.sqrt(dx * dx + dy * dy + dz * dz)
            if d < bestd or (d == bestd and f < best):
                bestd = d
                best = f
        v = best
        if bestd > r:
            r = 0.5 * (r + bestd)
            s = r / (eps + bestd)
            cx = pos[v, 0] + s * (cx - pos[v, 0])
            cy = pos[v, 1] + s * (cy - pos[v, 1])
            cz = pos[v, 2] + s * (cz - pos[v, 2])
        kind[v] = KIND_SIGMA
        sigma_buf[scount] = v
        scount += 1
        for i in range(fcount):
            if front_buf[i] == v:
                front_buf[i] = front_buf[fcount - 1]
                fcount -= 1
                break
        for t in range(indptr[v], indptr[v + 1]):
            w = indices[t]
            if mark[w] != epoch:
                mark[w] = epoch
                kind[w] = KIND_FRONT
                front_buf[fcount] = w
                fcount += 1
        if fcount == 0:
            return 0, empty, empty, empty, 0, 0.0, 0.0, 0.0, 0.0, 0.0
        ncomp, minsz, maxsz = _label_front(indptr, indices, mark, kind, cid, queue,
                                           front_buf, fcount, epoch)

    q = minsz / maxsz
    sig = sigma_buf[:scount].copy()
    fr = front_buf[:fcount].copy()
    lab = np.empty(fcount, np.int64)
    for i in range(fcount):
        lab[i] = cid[front_buf[i]]
    return 2, sig, fr, lab, ncomp, cx, cy, cz, r, q


@njit(cache=True, nogil=True)
def _gamma_of(indptr, indices, mark, kind, cid, epoch, v):
    """Front components adjacent to v: returns (count clipped at 2, first label)."""
    lab = np.int64(-1)
    for t in range(indptr[v], indptr[v + 1]):
        w = indices[t]
        if mark[w] == epoch and kind[w] == KIND_FRONT:
            l = cid[w]
            if lab == -1:
                lab = l
            elif l != lab:
                return 2, lab
    if lab == -1:
        return 0, lab
    return 1, lab


@njit(cache=True, nogil=True)
def shrink_separator_kernel(indptr, indices, pos, sigma_in, front_in, flabel_in,
                            cx, cy, cz, eps,
                            mark, kind, cid, lidx, queue, epoch_box):
    """Reduce a grown region to a minimal separator.

    The region positions are Laplacian-smoothed (fronts held fixed) purely to
    rank vertices by distance to the sphere centre; the graph itself never
    moves. Vertices are then absorbed into the single front component they
    touch, farthest first, until every remaining vertex touches at least two
    components. A vertex touching no front at all can block that loop on
    adversarial inputs, so such vertices are dropped outright when a full pass
    makes no progress (safe: they have no front neighbours to reconnect).

    Returns (sigma_out, front_out, flabel_out).
    """
    epoch = epoch_box[0] + 1
    epoch_box[0] = epoch
    s = sigma_in.size
    for i in range(s):
        v = sigma_in[i]
        mark[v] = epoch
        kind[v] = KIND_SIGMA
        lidx[v] = i
    for i in range(front_in.size):
        f = front_in[i]
        mark[f] = epoch
        kind[f] = KIND_FRONT
        cid[f] = flabel_in[i]

    # smoothing pass: ceil(sqrt(|sigma|)) Jacobi iterations, inverse-edge-length
    # weights recomputed from the previous iterate, non-sigma vertices fixed
    iters = int(math.ceil(math.sqrt(s)))
    P = np.empty((s, 3), np.float64)
    for i in range(s):
        v = sigma_in[i]
        P[i, 0] = pos[v, 0]
        P[i, 1] = pos[v, 1]
        P[i, 2] = pos[v, 2]
    Q = P.copy()
    for _ in range(iters):
        for i in range(s):
            v = sigma_in[i]
            if indptr[v + 1] == indptr[v]:
                Q[i, 0] = P[i, 0]
                Q[i, 1] = P[i, 1]
                Q[i, 2] = P[i, 2]
                continue
            px = P[i, 0]
            py = P[i, 1]
            pz = P[i, 2]
            nx = 0.0
            ny = 0.0
            nz = 0.0
            den = 0.0
            for t in range(indptr[v], indptr[v + 1]):
                w = indices[t]
                if mark[w] == epoch and kind[w] == KIND_SIGMA:
                    j = lidx[w]
                    qx = P[j, 0]
                    qy = P[j, 1]
                    qz = P[j, 2]
                else:
                    qx = pos[w, 0]
                    qy = pos[w, 1]
                    qz = pos[w, 2]
                dx = px - qx
                dy = py - qy
                dz = pz - qz
                d = math.sqrt(dx * dx + dy * dy + dz * dz)
                wgt = 1.0 / (d + eps)
                nx += wgt * qx
                ny += wgt * qy
                nz += wgt * qz
                den += wgt
            Q[i, 0] = nx / den
            Q[i, 1] = ny / den
            Q[i, 2] = nz / den
        P, Q = Q, P

    dist = np.empty(s, np.float64)
    for i in range(s):
        dx = P[i, 0] - cx
        dy = P[i, 1] - cy
        dz = P[i, 2] - cz
        dist[i] = math.sqrt(dx * dx + dy * dy + dz * dz)

    # scan order: distance descending, vertex id ascending on ties
    by_id = np.argsort(sigma_in)
    order = by_id[np.argsort(-dist[by_id], kind='mergesort')]

    while True:
        removed_any = False
        for oi in range(s):
            i = order[oi]
            v = sigma_in[i]
            if kind[v] != KIND_SIGMA:
                continue
            g, lab = _gamma_of(indptr, indices, mark, kind, cid, epoch, v)
            if g == 1:
                kind[v] = KIND_FRONT
                cid[v] = lab
                removed_any = True
        minimal = True
        for i in range(s):
            v = sigma_in[i]
            if kind[v] != KIND_SIGMA:
                continue
            g, lab = _gamma_of(indptr, indices, mark, kind, cid, epoch, v)
            if g < 2:
                minimal = False
                break
        if minimal:
            break
        if not removed_any:
            dropped = False
            for oi in range(s):
                i = order[oi]
                v = sigma_in[i]
                if kind[v] != KIND_SIGMA:
                    continue
                g, lab = _gamma_of(indptr, indices, mark, kind, cid, epoch, v)
                if g == 0:
                    kind[v] = KIND_DROPPED
                    dropped = True
                    break
            if not dropped:
                break

    out_s = 0
    out_f = front_in.size
    for i in range(s):
        v = sigma_in[i]
        if kind[v] == KIND_SIGMA:
            out_s += 1
        elif kind[v] == KIND_FRONT:
            out_f += 1
    sigma_out = np.empty(out_s, np.int64)
    front_out = np.empty(out_f, np.int64)
    flabel_out = np.empty(out_f, np.int64)
    a = 0
    for i in range(s):
        v = sigma_in[i]
        if kind[v] == KIND_SIGMA:
            sigma_out[a] = v
            a += 1
    b = 0
    for i in range(front_in.size):
        f = front_in[i]
        front_out[b] = f
        flabel_out[b] = cid[f]
        b += 1
    for i in range(s):
        v = sigma_in[i]
        if kind[v] == KIND_FRONT:
            front_out[b] = v
            flabel_out[b] = cid[v]
            b += 1
    return sigma_out, front_out, flabel_out


@njit(cache=True, nogil=True)
def khop_pairs(indptr, indices, pos, k, radius):
    """All vertex pairs (u, w) with u < w within k hops, optionally within radius.

    A negative radius disables the distance filter.
    """
    n = indptr.size - 1
    mark = np.full(n, -1, np.int64)
    depth = np.empty(n, np.int64)
    queue = np.empty(n, np.int64)
    cap = 4 * n + 16
    src = np.empty(cap, np.int64)
    dst = np.empty(cap, np.int64)
    cnt = 0
    r2 = radius * radius
    for u in range(n):
        mark[u] = u
        depth[u] = 0
        queue[0] = u
        head, tail = 0, 1
        while head < tail:
            x = queue[head]
            head += 1
            d = depth[x]
            if d >= k:
                continue
            for t in range(indptr[x], indptr[x + 1]):
                w = indices[t]
                if mark[w] != u:
                    mark[w] = u
                    depth[w] = d + 1
                    queue[tail] = w
                    tail += 1
                    if w > u:
                        ok = True
                        if radius >= 0.0:
                            dx = pos[u, 0] - pos[w, 0]
                            dy = pos[u, 1] - pos[w, 1]
                            dz = pos[u, 2] - pos[w, 2]
                            ok = dx * dx + dy * dy + dz * dz <= r2
                        if ok:
                            if cnt == cap:
                                cap *= 2
                                ns = np.empty(cap, np.int64)
                                ns[:cnt] = src[:cnt]
                                src = ns
                                nd = np.empty(cap, np.int64)
                                nd[:cnt] = dst[:cnt]
                                dst = nd
                            src[cnt] = u
                            dst[cnt] = w
                            cnt += 1
    return src[:cnt].copy(), dst[:cnt].copy()


@njit(cache=True, nogil=True)
def knn_pairs(pts, cellx, celly, cellz, gx, gy, gz, sorted_keys, order, k, radius):
    """Directed k-nearest pairs within ``radius`` using a uniform grid.

    The grid cell size equals the query radius, so all candidates live in the
    27 cells around a point. Nearest selection breaks distance ties by lower
    point id. Returns directed (i, j) pairs; callers symmetrise.
    """
    npts = pts.shape[0]
    r2 = radius * radius
    cap = 4 * npts + 16
    src = np.empty(cap, np.int64)
    dst = np.empty(cap, np.int64)
    cnt = 0
    bd = np.empty(k, np.float64)
    bj = np.empty(k, np.int64)
    for i in range(npts):
        m = 0
        for ox in range(-1, 2):
            cx = cellx[i] + ox
            if cx < 0 or cx >= gx:
                continue
            for oy in range(-1, 2):
                cy = celly[i] + oy
                if cy < 0 or cy >= gy:
                    continue
                for oz in range(-1, 2):
                    cz = cellz[i] + oz
                    if cz < 0 or cz >= gz:
                        continue
                    key = (cx * gy + cy) * gz + cz
                    lo = np.searchsorted(sorted_keys, key, side='left')
                    hi = np.searchsorted(sorted_keys, key, side='right')
                    for t in range(lo, hi):
                        j = order[t]
                        if j == i:
                            continue
                        dx = pts[i, 0] - pts[j, 0]
                        dy = pts[i, 1] - pts[j, 1]
                        dz = pts[i, 2] - pts[j, 2]
                        d2 = dx * dx + dy * dy + dz * dz
                        if d2 > r2:
                            continue
                        if m == k:
                            if d2 > bd[k - 1] or (d2 == bd[k - 1] and j > bj[k - 1]):
                                continue
                            p = k - 1
                        else:
                            p = m
                            m += 1
                        while p > 0 and (bd[p - 1] > d2 or (bd[p - 1] == d2 and bj[p - 1] > j)):
                            bd[p] = bd[p - 1]
                            bj[p] = bj[p - 1]
                            p -= 1
                        bd[p] = d2
                        bj[p] = j
        for t in range(m):
            if cnt == cap:
                cap *= 2
                ns = np.empty(cap, np.int64)
                ns[:cnt] = src[:cnt]
                src = ns
                nd = np.empty(cap, np.int64)
                nd[:cnt] = dst[:cnt]
                dst = nd
            src[cnt] = i
            dst[cnt] = bj[t]
            cnt += 1
    return src[:cnt].copy(), dst[:cnt].copy()
