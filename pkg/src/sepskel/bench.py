"""Scaling benchmark for the separator stage.

Runs separator sampling over a ladder of geometrically growing versions of
one input (edge-contraction subsamples of a mesh graph, or voxelisations at
increasing resolution), records wall-clock per size, and fits a power law so
the growth exponent can be checked against the expected asymptotics.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .graph import SpatialGraph, simplify_contract
from .ingest import VoxelGrid, voxels_to_graph
from .pipeline import PipelineConfig, resolve_threads
from .separators import sample_separators


@dataclass
class BenchRow:
    n: int
    seconds: float
    separators: int


def _time_stage(graph: SpatialGraph, config: PipelineConfig) -> BenchRow:
    threads = resolve_threads(config)
    t0 = time.perf_counter()
    seps = sample_separators(graph, config.tau, config.optimize,
                             config.seed, threads)
    dt = time.perf_counter() - t0
    return BenchRow(graph.vertex_count, dt, len(seps.separators))


def _warm_up(graph: SpatialGraph, config: PipelineConfig) -> None:
    # jit-compiled kernels pay their compile cost on first use; keep that out
    # of the timed rows by running the smallest size once untimed
    _time_stage(graph, config)


def bench_contract(graph: SpatialGraph, config: PipelineConfig,
                   steps: int = 6, ratio: float = 0.5) -> list:
    """Sample the separator stage at sizes n, n*ratio, n*ratio^2, ...

    Rows come back smallest size first.
    """
    if steps < 2:
        raise ValueError("need at least two sizes to fit a law")
    rows = []
    for i in reversed(range(steps)):
        f = ratio ** i
        g = graph if i == 0 else simplify_contract(graph, f)[0]
        if not rows:
            _warm_up(g, config)
        rows.append(_time_stage(g, config))
    return rows


def voxelize_graph(graph: SpatialGraph, resolution: int,
                   pad: int = 1) -> VoxelGrid:
    """Rasterise the graph's vertices and edges into a cubic-cell grid.

    ``resolution`` is the cell count along the longest bounding-box side.
    Edges are sampled at half-cell steps so the rasterisation is connected.
    """
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    pos = graph.positions
    lo = pos.min(axis=0)
    span = pos.max(axis=0) - lo
    cell = float(span.max()) / resolution if span.max() > 0 else 1.0
    dims = (np.ceil(span / cell).astype(np.int64) + 1 + 2 * pad)
    origin = lo - pad * cell
    occupied = np.zeros(tuple(dims), dtype=bool)

    def mark(points):
        ijk = np.floor((points - origin) / cell).astype(np.int64)
        np.clip(ijk, 0, dims - 1, out=ijk)
        occupied[ijk[:, 0], ijk[:, 1], ijk[:, 2]] = True

    mark(pos)
    for u, v in graph.edges():
        a, b = pos[u], pos[v]
        length = float(np.sqrt(((b - a) ** 2).sum()))
        nstep = max(2, int(np.ceil(length / (0.5 * cell))) + 1)
        t = np.linspace(0.0, 1.0, nstep)[:, None]
        mark(a + t * (b - a))
    values = occupied.astype(np.float32).ravel(order="F")
    return VoxelGrid(tuple(int(d) for d in dims), values, (cell, cell, cell))


def bench_voxelize(graph: SpatialGraph, config: PipelineConfig,
                   steps: int = 6, base: float = 8.0,
                   factor: float = 2.0 ** 0.5) -> list:
    """Sample the separator stage over geometrically finer voxelisations."""
    if steps < 2:
        raise ValueError("need at least two sizes to fit a law")
    rows = []
    for i in range(steps):
        res = int(round(base * factor ** i))
        grid = voxelize_graph(graph, res)
        g = voxels_to_graph(grid, config.vox_threshold)
        if not rows:
            _warm_up(g, config)
        rows.append(_time_stage(g, config))
    return rows


def fit_power_law(rows) -> tuple:
    """Least-squares log-log fit of seconds vs n. Returns (exponent, r2)."""
    if len(rows) < 2:
        raise ValueError("need at least two rows")
    x = np.log([max(r.n, 1) for r in rows])
    y = np.log([max(r.seconds, 1e-6) for r in rows])
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(((y - pred) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(slope), r2


def write_csv(path: str, rows) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write("n,seconds,separators\n")
        for r in rows:
            fh.write("%d,%.6f,%d\n" % (r.n, r.seconds, r.separators))


def read_csv(path: str) -> list:
    rows = []
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline()
        if header.strip() != "n,seconds,separators":
            raise ValueError("not a bench CSV: %r" % (path,))
        for line in fh:
            if not line.strip():
                continue
            n, sec, seps = line.strip().split(",")
            rows.append(BenchRow(int(n), float(sec), int(seps)))
    return rows
