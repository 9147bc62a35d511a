"""Curve skeletons of spatially embedded graphs via local separators.

The pipeline: ingest a mesh, voxel grid or point cloud into a
:class:`SpatialGraph`; sample local separators; pack a disjoint subset;
collapse the induced partition into a skeleton graph with per-node weights
and radii. A Reeb-style sweep provides an alternative separator source that
feeds the same packing stage.
"""

from .graph import SpatialGraph, connected_components, saturate, \
    simplify_contract, smooth_positions
from .ingest import PointCloud, VoxelGrid, mesh_to_graph, points_to_graph, \
    voxels_to_graph
from .io import ParseError, read_map, read_mesh, read_points, read_seps, \
    read_sgraph, read_voxels, write_map, write_mesh, write_points, \
    write_seps, write_sgraph, write_voxels
from .packing import PackedSeparators, pack_separators, redundancy_counts, \
    redundancy_counts_allpairs
from .pipeline import PipelineConfig, PipelineResult, run_pipeline
from .reeb import HeightField, axis_height, sweep_separators
from .separators import Separator, SeparatorSet, Workspace, find_separator, \
    front_size_ratio, is_minimal_separator, local_separator, \
    optimize_separator, sample_separators, separator_energy, shrink_separator
from .skeleton import Skeleton, annotate_radii, collapse_clique_complexes, \
    extract_skeleton, maximize_separators, quotient_graph, smooth_skeleton

__version__ = "0.1.0"

__all__ = [
    "SpatialGraph", "connected_components", "saturate", "simplify_contract",
    "smooth_positions",
    "PointCloud", "VoxelGrid", "mesh_to_graph", "points_to_graph",
    "voxels_to_graph",
    "ParseError", "read_map", "read_mesh", "read_points", "read_seps",
    "read_sgraph", "read_voxels", "write_map", "write_mesh", "write_points",
    "write_seps", "write_sgraph", "write_voxels",
    "PackedSeparators", "pack_separators", "redundancy_counts",
    "redundancy_counts_allpairs",
    "PipelineConfig", "PipelineResult", "run_pipeline",
    "HeightField", "axis_height", "sweep_separators",
    "Separator", "SeparatorSet", "Workspace", "find_separator",
    "front_size_ratio", "is_minimal_separator", "local_separator",
    "optimize_separator", "sample_separators", "separator_energy",
    "shrink_separator",
    "Skeleton", "annotate_radii", "collapse_clique_complexes",
    "extract_skeleton", "maximize_separators", "quotient_graph",
    "smooth_skeleton",
    "__version__",
]
