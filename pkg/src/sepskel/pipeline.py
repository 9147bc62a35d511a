"""End-to-end wiring: ingest, sample, pack, extract, write, report.

This module owns the configuration record and the composition of the stage
functions; the CLI is a thin argparse shell around :func:`run_pipeline` and
the single-stage helpers.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

import numpy as np

from .graph import SpatialGraph, saturate, simplify_contract
from .ingest import PointCloud, VoxelGrid, mesh_to_graph, points_to_graph, \
    voxels_to_graph
from .io import ParseError, read_mesh, read_points, read_seps, read_sgraph, \
    read_voxels, write_map, write_sgraph
from .packing import PackedSeparators, pack_separators
from .separators import Separator, SeparatorSet, sample_separators
from .skeleton import Skeleton, extract_skeleton

FORMATS = ("mesh", "vox", "points", "graph")
_EXT_FORMAT = {
    ".obj": "mesh",
    ".vox": "vox",
    ".pts": "points",
    ".xyz": "points",
    ".sgraph": "graph",
}


@dataclass
class PipelineConfig:
    """Everything tunable, with the documented defaults.

    ``threads=None`` defers to the SEPSKEL_THREADS environment variable and
    then to the machine's CPU count; ``deterministic`` forces one thread.
    ``sat_l``/``sat_radius`` default to 3 and twice the linking radius for
    point clouds, and to 1 (no saturation) for everything else.
    """
    tau: float = 0.0875
    seed: int = 0
    threads: int | None = None
    optimize: bool = False
    smooth_iters: int = 0
    knn: int = 8
    radius: float | None = None
    sat_l: int | None = None
    sat_radius: float | None = None
    contract: float = 1.0
    vox_threshold: float = 0.37
    position_mode: str = "class-average"
    deterministic: bool = False

    def __post_init__(self):
        if not (0.0 < self.tau < 1.0):
            raise ValueError("tau must be in (0, 1)")
        if self.smooth_iters < 0:
            raise ValueError("smooth-iters must be non-negative")
        if not (0.0 < self.contract <= 1.0):
            raise ValueError("contract must be in (0, 1]")
        if self.position_mode not in ("class-average", "separator-average"):
            raise ValueError("position-mode must be class-average or "
                             "separator-average")
        if self.knn < 1:
            raise ValueError("knn must be a positive integer")
        if self.radius is not None and self.radius <= 0:
            raise ValueError("radius must be positive")


def resolve_threads(config: PipelineConfig) -> int:
    if config.deterministic:
        return 1
    if config.threads is not None:
        if config.threads < 1:
            raise ValueError("threads must be >= 1")
        return int(config.threads)
    env = os.environ.get("SEPSKEL_THREADS")
    if env:
        try:
            t = int(env)
        except ValueError:
            raise ValueError("SEPSKEL_THREADS must be an integer") from None
        if t < 1:
            raise ValueError("SEPSKEL_THREADS must be >= 1")
        return t
    return os.cpu_count() or 1


def detect_format(path: str, fmt: str | None = None) -> str:
    if fmt is not None:
        if fmt not in FORMATS:
            raise ValueError("unknown format %r (choose from %s)"
                             % (fmt, ", ".join(FORMATS)))
        return fmt
    ext = os.path.splitext(path)[1].lower()
    if ext in _EXT_FORMAT:
        return _EXT_FORMAT[ext]
    raise ValueError("cannot infer input format from %r; pass --format" % path)


def load_input(path: str, fmt: str, config: PipelineConfig):
    """Read and convert an input file. Returns (graph, mapping).

    ``mapping[i]`` is the graph vertex that input record i (point or vertex)
    ended up in; None means the identity.
    """
    mapping = None
    if fmt == "mesh":
        positions, faces, _ = read_mesh(path)
        graph = mesh_to_graph(positions, faces)
    elif fmt == "vox":
        dims, spacing, values = read_voxels(path)
        graph = voxels_to_graph(VoxelGrid(dims, values, spacing),
                                config.vox_threshold)
    elif fmt == "points":
        if config.radius is None:
            raise ValueError("point-cloud input requires --radius")
        pts = read_points(path)
        l = config.sat_l if config.sat_l is not None else 3
        return points_to_graph(PointCloud(pts), config.knn, config.radius,
                               l, config.sat_radius, config.contract)
    elif fmt == "graph":
        graph, _, _ = read_sgraph(path)
    else:
        raise ValueError("unknown format %r" % (fmt,))
    l = config.sat_l if config.sat_l is not None else 1
    if l > 1 or config.sat_radius is not None:
        graph = saturate(graph, l, config.sat_radius)
    if config.contract < 1.0:
        graph, mapping = simplify_contract(graph, config.contract)
    return graph, mapping


def load_separator_set(path: str, graph: SpatialGraph) -> SeparatorSet:
    """Rebuild a SeparatorSet from a dump, bound to ``graph``."""
    n = graph.vertex_count
    seps = []
    for q, center, r, ids in read_seps(path):
        if max(ids) >= n:
            raise ParseError(path, "separator vertex id exceeds graph size")
        seps.append(Separator(frozenset(ids), q, center, r, ()))
    return SeparatorSet(seps, n)


# ---- full run -------------------------------------------------------------------

@dataclass
class PipelineResult:
    skeleton: Skeleton
    stats: dict
    warnings: list = field(default_factory=list)


def run_pipeline(config: PipelineConfig, input_path: str, output_path: str,
                 fmt: str | None = None,
                 map_path: str | None = None) -> PipelineResult:
    """Input file to skeleton file, collecting per-stage wall-clock times.

    An input that yields no separators is not an error: the result is one
    skeleton node per connected component, flagged by a warning.
    """
    stages = {}
    t0 = time.perf_counter()
    fmt = detect_format(input_path, fmt)
    graph, mapping = load_input(input_path, fmt, config)
    if graph.vertex_count == 0:
        raise ParseError(input_path, "empty graph (no vertices)")
    stages["ingest"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    seps = sample_separators(graph, config.tau, config.optimize,
                             config.seed, resolve_threads(config))
    stages["separators"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    packed = pack_separators(seps)
    stages["packing"] = time.perf_counter() - t0

    warnings = []
    if not packed.chosen:
        warnings.append("no separators found; writing one skeleton node per "
                        "connected component")

    t0 = time.perf_counter()
    skel = extract_skeleton(graph, packed, config.position_mode,
                            config.smooth_iters)
    stages["extraction"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    write_sgraph(output_path, skel.graph, skel.radii, skel.weights)
    if map_path is not None:
        assign = skel.assignment if mapping is None \
            else skel.assignment[mapping]
        write_map(map_path, assign)
    stages["output"] = time.perf_counter() - t0

    stats = {
        "input vertices": graph.vertex_count,
        "separators found": len(seps.separators),
        "separators packed": len(packed.chosen),
        "skeleton vertices": skel.graph.vertex_count,
        "leaves": skel.leaf_count(),
        "branches": skel.branch_count(),
        "stage seconds": stages,
    }
    return PipelineResult(skel, stats, warnings)


def format_stats(stats: dict) -> str:
    lines = []
    for key, value in stats.items():
        if key == "stage seconds":
            timing = "  ".join("%s %.3f" % (name, sec)
                               for name, sec in value.items())
            lines.append("%-18s: %s" % (key, timing))
        else:
            lines.append("%-18s: %d" % (key, value))
    return "\n".join(lines)
