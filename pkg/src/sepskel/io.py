"""Readers and writers for the on-disk formats.

Text formats use '#' comments and whitespace-separated fields; floats are
written with ``repr`` so a write/read round trip is exact. The voxel format is
binary with a fixed 16-byte magic. Malformed input raises :class:`ParseError`
with the offending line number where one exists.
"""

from __future__ import annotations

import struct
import warnings

import numpy as np

from .graph import SpatialGraph

VOX_MAGIC = b"SEPSKELVOX00001\n"


class ParseError(Exception):
    """Input file violates its format."""

    def __init__(self, path, message, line=None):
        where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)
        self.path = path
        self.line = line


def _fmt(x: float) -> str:
    return repr(float(x))


# ---- .sgraph -----------------------------------------------------------------

def read_sgraph(path):
    """Read a graph file.

    Returns (graph, radii, weights); the last two are None for plain graphs
    and arrays for the skeleton variant (vertex lines with five floats).
    """
    verts = []
    extras = []
    edges = []
    width = None
    with open(path, "r", encoding="ascii") as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tok = line.split()
            if tok[0] == "v":
                if len(tok) not in (4, 6):
                    raise ParseError(path, "vertex line needs 3 or 5 floats", ln)
                if width is None:
                    width = len(tok)
                elif width != len(tok):
                    raise ParseError(path, "mixed vertex line widths", ln)
                try:
                    vals = [float(t) for t in tok[1:]]
                except ValueError:
                    raise ParseError(path, "bad float in vertex line", ln) from None
                verts.append(vals[:3])
                if len(tok) == 6:
                    extras.append(vals[3:])
            elif tok[0] == "e":
                if len(tok) != 3:
                    raise ParseError(path, "edge line needs 2 vertex ids", ln)
                try:
                    i, j = int(tok[1]), int(tok[2])
                except ValueError:
                    raise ParseError(path, "bad vertex id in edge line", ln) from None
                if i == j:
                    raise ParseError(path, "self loop", ln)
                edges.append((i, j, ln))
            else:
                raise ParseError(path, f"unknown record '{tok[0]}'", ln)
    n = len(verts)
    for i, j, ln in edges:
        if not (0 <= i < n and 0 <= j < n):
            raise ParseError(path, "edge endpoint out of range", ln)
    positions = np.asarray(verts, dtype=np.float64).reshape(n, 3)
    pairs = np.asarray([(i, j) for i, j, _ in edges], dtype=np.int64).reshape(-1, 2)
    graph = SpatialGraph.from_edges(positions, pairs)
    if extras:
        ex = np.asarray(extras, dtype=np.float64)
        return graph, ex[:, 0].copy(), ex[:, 1].copy()
    return graph, None, None


def write_sgraph(path, graph: SpatialGraph, radii=None, weights=None):
    """Write a graph file; pass radii and weights for the skeleton variant."""
    skel = radii is not None or weights is not None
    if skel and (radii is None or weights is None):
        raise ValueError("skeleton output needs both radii and weights")
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"# sgraph v={graph.vertex_count} e={graph.edge_count}\n")
        for i in range(graph.vertex_count):
            x, y, z = graph.positions[i]
            if skel:
                fh.write(f"v {_fmt(x)} {_fmt(y)} {_fmt(z)} "
                         f"{_fmt(radii[i])} {_fmt(weights[i])}\n")
            else:
                fh.write(f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}\n")
        for u, v in graph.edges():
            fh.write(f"e {u} {v}\n")


# ---- .seps -------------------------------------------------------------------

def read_seps(path):
    """Read separator dumps; returns a list of (quality, center, radius, ids)."""
    out = []
    with open(path, "r", encoding="ascii") as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tok = line.split()
            if (len(tok) < 10 or tok[0] != "s" or tok[1] != "q=" or tok[3] != "c="
                    or tok[7] != "r=" or tok[9] != ":"):
                raise ParseError(path, "malformed separator line", ln)
            try:
                q = float(tok[2])
                center = np.array([float(tok[4]), float(tok[5]), float(tok[6])])
                r = float(tok[8])
                ids = [int(t) for t in tok[10:]]
            except ValueError:
                raise ParseError(path, "bad numeric field", ln) from None
            if not ids:
                raise ParseError(path, "separator with no vertices", ln)
            if any(i < 0 for i in ids):
                raise ParseError(path, "negative vertex id", ln)
            out.append((q, center, r, ids))
    return out


def write_seps(path, separators):
    """Write separator dumps. ``separators`` yields objects with
    quality/center/radius/vertices attributes."""
    with open(path, "w", encoding="ascii") as fh:
        for s in separators:
            cx, cy, cz = (float(c) for c in s.center)
            ids = " ".join(str(v) for v in sorted(s.vertices))
            fh.write(f"s q= {_fmt(s.quality)} c= {_fmt(cx)} {_fmt(cy)} {_fmt(cz)} "
                     f"r= {_fmt(s.radius)} : {ids}\n")


# ---- meshes ------------------------------------------------------------------

def read_mesh(path):
    """Read a Wavefront-style mesh: 'v x y z' and 'f i j k [l]' (1-based).

    Unknown line types are ignored. Faces with repeated vertices are skipped.
    Returns (positions, faces, skipped_degenerate).
    """
    verts = []
    faces = []
    skipped = 0
    with open(path, "r", encoding="ascii", errors="replace") as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tok = line.split()
            if tok[0] == "v":
                if len(tok) != 4:
                    raise ParseError(path, "vertex line needs 3 coordinates", ln)
                try:
                    verts.append((float(tok[1]), float(tok[2]), float(tok[3])))
                except ValueError:
                    raise ParseError(path, "bad float in vertex line", ln) from None
            elif tok[0] == "f":
                if len(tok) not in (4, 5):
                    raise ParseError(path, "face needs 3 or 4 vertices", ln)
                try:
                    ids = [int(t.split("/")[0]) - 1 for t in tok[1:]]
                except ValueError:
                    raise ParseError(path, "bad vertex id in face", ln) from None
                if any(i < 0 for i in ids):
                    raise ParseError(path, "face index out of range", ln)
                if len(set(ids)) != len(ids):
                    skipped += 1
                    continue
                faces.append(tuple(ids))
    n = len(verts)
    for f in faces:
        if any(i >= n for i in f):
            raise ParseError(path, "face index out of range")
    positions = np.asarray(verts, dtype=np.float64).reshape(n, 3)
    return positions, faces, skipped


def write_mesh(path, positions, faces):
    with open(path, "w", encoding="ascii") as fh:
        for x, y, z in positions:
            fh.write(f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}\n")
        for f in faces:
            fh.write("f " + " ".join(str(i + 1) for i in f) + "\n")


# ---- point clouds --------------------------------------------------------------

def read_points(path):
    """Read an ASCII point cloud, one 'x y z' triple per line."""
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # empty files are legal
            pts = np.loadtxt(path, comments="#", dtype=np.float64, ndmin=2)
    except ValueError as exc:
        raise ParseError(path, f"bad point data ({exc})") from None
    if pts.size == 0:
        return np.empty((0, 3), np.float64)
    if pts.shape[1] != 3:
        raise ParseError(path, f"points need 3 fields per row, got {pts.shape[1]}")
    return pts


def write_points(path, points):
    with open(path, "w", encoding="ascii") as fh:
        for x, y, z in points:
            fh.write(f"{_fmt(x)} {_fmt(y)} {_fmt(z)}\n")


# ---- voxel grids ----------------------------------------------------------------

def read_voxels(path):
    """Read the binary voxel format; returns (dims, spacing, values).

    Layout: 16-byte magic, three little-endian uint32 dims, three little-endian
    float32 spacings, then nx*ny*nz float32 values with x varying fastest.
    """
    with open(path, "rb") as fh:
        magic = fh.read(16)
        if magic != VOX_MAGIC:
            raise ParseError(path, "bad magic, not a voxel file")
        head = fh.read(24)
        if len(head) != 24:
            raise ParseError(path, "truncated header")
        nx, ny, nz = struct.unpack("<3I", head[:12])
        sx, sy, sz = struct.unpack("<3f", head[12:])
        want = nx * ny * nz
        data = np.frombuffer(fh.read(4 * want), dtype="<f4")
        if data.size != want:
            raise ParseError(path, "truncated voxel data")
        if fh.read(1):
            raise ParseError(path, "trailing bytes after voxel data")
    return (int(nx), int(ny), int(nz)), (float(sx), float(sy), float(sz)), \
        data.astype(np.float32)


def write_voxels(path, dims, spacing, values):
    nx, ny, nz = dims
    values = np.asarray(values, dtype="<f4").reshape(-1)
    if values.size != nx * ny * nz:
        raise ValueError("value count does not match dims")
    with open(path, "wb") as fh:
        fh.write(VOX_MAGIC)
        fh.write(struct.pack("<3I", nx, ny, nz))
        fh.write(struct.pack("<3f", *spacing))
        fh.write(values.tobytes())


# ---- vertex maps ------------------------------------------------------------------

def write_map(path, mapping):
    """Write 'm input_id node_id' lines for an input-to-skeleton assignment."""
    with open(path, "w", encoding="ascii") as fh:
        for i, node in enumerate(mapping):
            fh.write(f"m {i} {int(node)}\n")


def read_map(path):
    pairs = []
    with open(path, "r", encoding="ascii") as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tok = line.split()
            if len(tok) != 3 or tok[0] != "m":
                raise ParseError(path, "malformed map line", ln)
            pairs.append((int(tok[1]), int(tok[2])))
    n = len(pairs)
    out = np.empty(n, np.int64)
    for i, node in pairs:
        if not (0 <= i < n):
            raise ParseError(path, "map input id out of range")
        out[i] = node
    return out
