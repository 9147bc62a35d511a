"""Command-line frontend.

Subcommands cover the full run plus every stage on its own, so pipelines can
be composed manually for debugging: ``mesh2graph | seps | pack | extract``
produces the same files as ``run``. Exit codes: 0 success, 1 usage, 2 I/O or
parse failure, 3 internal error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import bench as bench_mod
from .io import ParseError, read_sgraph, write_map, write_seps, write_sgraph
from .packing import PackedSeparators, pack_separators
from .pipeline import FORMATS, PipelineConfig, detect_format, format_stats, \
    load_input, load_separator_set, resolve_threads, run_pipeline
from .reeb import axis_height, sweep_separators
from .separators import sample_separators
from .skeleton import Skeleton, extract_skeleton, smooth_skeleton

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_INTERNAL = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "%s: error: %s\n" % (self.prog, message))


def _add_ingest_flags(p):
    p.add_argument("--format", choices=FORMATS, default=None,
                   help="input format (default: inferred from extension)")
    p.add_argument("--knn", type=int, default=8, metavar="K",
                   help="neighbours per point for point-cloud linking")
    p.add_argument("--radius", type=float, default=None, metavar="R",
                   help="linking radius for point clouds")
    p.add_argument("--sat-l", type=int, default=None, metavar="L",
                   help="saturation hop count (default: 3 for points, else 1)")
    p.add_argument("--sat-radius", type=float, default=None, metavar="R",
                   help="distance cap for saturation edges")
    p.add_argument("--contract", type=float, default=1.0, metavar="F",
                   help="contract the graph to this vertex fraction")
    p.add_argument("--vox-threshold", type=float, default=0.37, metavar="T",
                   help="voxel foreground threshold")


def _add_sample_flags(p):
    p.add_argument("--tau", type=float, default=0.0875,
                   help="front balance threshold")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: SEPSKEL_THREADS or all cores)")
    p.add_argument("--optimize", action="store_true",
                   help="tighten each separator by energy-descent swaps")
    p.add_argument("--deterministic", action="store_true",
                   help="force single-threaded, byte-reproducible runs")


def _add_extract_flags(p):
    p.add_argument("--smooth-iters", type=int, default=0, metavar="N",
                   help="skeleton smoothing iterations")
    p.add_argument("--position-mode", default="class-average",
                   choices=("class-average", "separator-average"),
                   help="node placement rule")
    p.add_argument("--map", action="store_true",
                   help="also write an input-to-node .map file")


def _config_from(args, parser) -> PipelineConfig:
    try:
        return PipelineConfig(
            tau=getattr(args, "tau", 0.0875),
            seed=getattr(args, "seed", 0),
            threads=getattr(args, "threads", None),
            optimize=getattr(args, "optimize", False),
            smooth_iters=getattr(args, "smooth_iters", 0),
            knn=getattr(args, "knn", 8),
            radius=getattr(args, "radius", None),
            sat_l=getattr(args, "sat_l", None),
            sat_radius=getattr(args, "sat_radius", None),
            contract=getattr(args, "contract", 1.0),
            vox_threshold=getattr(args, "vox_threshold", 0.37),
            position_mode=getattr(args, "position_mode", "class-average"),
            deterministic=getattr(args, "deterministic", False),
        )
    except ValueError as exc:
        parser.error(str(exc))


def _detect(args, parser, path) -> str:
    try:
        return detect_format(path, args.format)
    except ValueError as exc:
        parser.error(str(exc))


def _map_path(output: str) -> str:
    return os.path.splitext(output)[0] + ".map"


def _load_graph_arg(args, parser, config, path):
    fmt = _detect(args, parser, path)
    if fmt == "points" and config.radius is None:
        parser.error("point-cloud input requires --radius")
    graph, mapping = load_input(path, fmt, config)
    if graph.vertex_count == 0:
        raise ParseError(path, "empty graph (no vertices)")
    return graph, mapping


# ---- subcommand handlers ---------------------------------------------------------

def _cmd_ingest(args, parser):
    config = _config_from(args, parser)
    graph, mapping = _load_graph_arg(args, parser, config, args.input)
    write_sgraph(args.output, graph)
    if args.map:
        ident = np.arange(graph.vertex_count) if mapping is None else mapping
        write_map(_map_path(args.output), ident)
    return EXIT_OK


def _cmd_seps(args, parser):
    config = _config_from(args, parser)
    graph, _ = _load_graph_arg(args, parser, config, args.input)
    seps = sample_separators(graph, config.tau, config.optimize, config.seed,
                             resolve_threads(config))
    write_seps(args.output, seps.separators)
    print("separators found  : %d" % len(seps.separators))
    return EXIT_OK


def _cmd_reeb(args, parser):
    config = _config_from(args, parser)
    graph, _ = _load_graph_arg(args, parser, config, args.input)
    try:
        axes = _parse_axes(args.axes)
    except ValueError as exc:
        parser.error(str(exc))
    collected = []
    for axis in axes:
        field = axis_height(graph, axis, args.smooth_iters)
        collected.extend(sweep_separators(graph, field).separators)
    write_seps(args.output, collected)
    print("separators found  : %d" % len(collected))
    return EXIT_OK


def _parse_axes(text: str):
    axes = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 3:
            raise ValueError("axis %r is not an x,y,z triple" % chunk)
        axes.append([float(p) for p in parts])
    if not axes:
        raise ValueError("no axes given")
    return axes


def _cmd_pack(args, parser):
    config = _config_from(args, parser)
    graph, _ = _load_graph_arg(args, parser, config, args.input)
    sep_set = load_separator_set(args.seps, graph)
    packed = pack_separators(sep_set)
    write_seps(args.output, packed.chosen)
    print("separators packed : %d (rejected %d)"
          % (len(packed.chosen), packed.rejected_count))
    return EXIT_OK


def _cmd_extract(args, parser):
    config = _config_from(args, parser)
    graph, mapping = _load_graph_arg(args, parser, config, args.input)
    sep_set = load_separator_set(args.seps, graph)
    packed = PackedSeparators(list(sep_set.separators), 0)
    skel = extract_skeleton(graph, packed, config.position_mode,
                            config.smooth_iters)
    write_sgraph(args.output, skel.graph, skel.radii, skel.weights)
    if args.map:
        assign = skel.assignment if mapping is None \
            else skel.assignment[mapping]
        write_map(_map_path(args.output), assign)
    return EXIT_OK


def _cmd_smooth(args, parser):
    if args.smooth_iters < 0:
        parser.error("--smooth-iters must be non-negative")
    graph, radii, weights = read_sgraph(args.input)
    n = graph.vertex_count
    skel = Skeleton(graph,
                    weights if weights is not None else np.ones(n),
                    radii if radii is not None else np.zeros(n),
                    np.arange(n, dtype=np.int64))
    skel = smooth_skeleton(skel, args.smooth_iters)
    write_sgraph(args.output, skel.graph, skel.radii, skel.weights)
    return EXIT_OK


def _cmd_run(args, parser):
    config = _config_from(args, parser)
    fmt = _detect(args, parser, args.input)
    if fmt == "points" and config.radius is None:
        parser.error("point-cloud input requires --radius")
    result = run_pipeline(config, args.input, args.output, fmt,
                          _map_path(args.output) if args.map else None)
    for w in result.warnings:
        print("warning: %s" % w, file=sys.stderr)
    print(format_stats(result.stats))
    return EXIT_OK


def _cmd_bench(args, parser):
    config = _config_from(args, parser)
    graph, _ = _load_graph_arg(args, parser, config, args.input)
    if args.steps < 2:
        parser.error("--steps must be at least 2")
    if args.mode == "contract":
        rows = bench_mod.bench_contract(graph, config, args.steps)
    else:
        rows = bench_mod.bench_voxelize(graph, config, args.steps)
    bench_mod.write_csv(args.output, rows)
    exponent, r2 = bench_mod.fit_power_law(rows)
    print("power-law exponent: %.3f (r2 %.3f)" % (exponent, r2))
    return EXIT_OK


# ---- parser assembly -----------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="sepskel",
                     description="Curve skeletons from local separators.")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    def add(name, handler, helptext, ingest=False, sample=False,
            extract=False, mapflag=False, positional=("input", "output")):
        p = sub.add_parser(name, help=helptext)
        for arg in positional:
            p.add_argument(arg)
        if ingest:
            _add_ingest_flags(p)
        if sample:
            _add_sample_flags(p)
        if extract:
            _add_extract_flags(p)
        elif mapflag:
            p.add_argument("--map", action="store_true",
                           help="also write an id-mapping .map file")
        p.set_defaults(func=handler)
        return p

    add("mesh2graph", _cmd_ingest, "mesh file to .sgraph", ingest=True,
        mapflag=True)
    add("vox2graph", _cmd_ingest, "voxel grid to .sgraph", ingest=True,
        mapflag=True)
    add("pts2graph", _cmd_ingest, "point cloud to .sgraph", ingest=True,
        mapflag=True)
    add("seps", _cmd_seps, "find separators, write .seps", ingest=True,
        sample=True)
    reeb = add("reeb", _cmd_reeb, "sweep separators from axis heights",
               ingest=True)
    reeb.add_argument("--axes", default="1,0,0;0,1,0;0,0,1",
                      help="semicolon-separated x,y,z triples")
    reeb.add_argument("--smooth-iters", type=int, default=10, metavar="N",
                      help="height-field smoothing rounds")
    pack = add("pack", _cmd_pack, "pack a .seps file to a disjoint subset",
               ingest=True, positional=("input", "seps", "output"))
    extract = add("extract", _cmd_extract, "packed .seps to skeleton .sgraph",
                  ingest=True, extract=True,
                  positional=("input", "seps", "output"))
    smooth = sub.add_parser("smooth", help="smooth a skeleton .sgraph")
    smooth.add_argument("input")
    smooth.add_argument("output")
    smooth.add_argument("--smooth-iters", type=int, default=1, metavar="N",
                        help="smoothing iterations")
    smooth.set_defaults(func=_cmd_smooth)
    add("run", _cmd_run, "full pipeline: input file to skeleton",
        ingest=True, sample=True, extract=True)
    b = add("bench", _cmd_bench, "time the separator stage across sizes",
            ingest=True, sample=True)
    b.add_argument("--mode", choices=("contract", "voxelize"),
                   default="contract", help="how to build the size ladder")
    b.add_argument("--steps", type=int, default=6,
                   help="number of geometric size steps")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except ParseError as exc:
        print("sepskel: error: %s" % exc, file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print("sepskel: error: %s" % exc, file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # internal invariant violations
        print("sepskel: internal error: %s: %s"
              % (type(exc).__name__, exc), file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
