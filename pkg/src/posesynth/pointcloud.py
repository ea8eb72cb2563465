"""Colored point clouds: PLY I/O, bounds, and a procedural test scene.

Only the vertex element of a PLY file is consumed; faces and unknown
properties are skipped (counted in ``PointCloud.skipped``). Supported
encodings are ascii and binary_little_endian.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PlyParseError

_PLY_SCALARS = {
    "char": "i1", "int8": "i1",
    "uchar": "u1", "uint8": "u1",
    "short": "i2", "int16": "i2",
    "ushort": "u2", "uint16": "u2",
    "int": "i4", "int32": "i4",
    "uint": "u4", "uint32": "u4",
    "float": "f4", "float32": "f4",
    "double": "f8", "float64": "f8",
}

DEFAULT_COLOR = (128, 128, 128)


@dataclass(frozen=True)
class PointCloud:
    """(N,3) float64 xyz in meters + (N,3) uint8 rgb."""

    xyz: np.ndarray
    rgb: np.ndarray
    skipped: int = 0  # elements/properties ignored while loading

    def __post_init__(self):
        xyz = np.ascontiguousarray(self.xyz, dtype=np.float64)
        rgb = np.ascontiguousarray(self.rgb, dtype=np.uint8)
        if xyz.ndim != 2 or xyz.shape[1] != 3 or rgb.shape != xyz.shape:
            raise ValueError("xyz and rgb must both be (N, 3)")
        if not np.all(np.isfinite(xyz)):
            raise ValueError("point coordinates must be finite")
        object.__setattr__(self, "xyz", xyz)
        object.__setattr__(self, "rgb", rgb)

    def __len__(self):
        return self.xyz.shape[0]


@dataclass(frozen=True)
class Aabb:
    min: np.ndarray
    max: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.min, dtype=np.float64)
        hi = np.asarray(self.max, dtype=np.float64)
        if lo.shape != (3,) or hi.shape != (3,):
            raise ValueError("bounds must be 3-vectors")
        if np.any(lo > hi):
            raise ValueError("min must not exceed max")
        object.__setattr__(self, "min", lo)
        object.__setattr__(self, "max", hi)

    @property
    def extent(self) -> np.ndarray:
        return self.max - self.min

    @property
    def center(self) -> np.ndarray:
        return (self.min + self.max) / 2.0


def bounding_box(cloud: PointCloud) -> Aabb:
    if len(cloud) == 0:
        raise ValueError("cannot compute bounds of an empty cloud")
    return Aabb(cloud.xyz.min(axis=0), cloud.xyz.max(axis=0))


def _parse_header(data: bytes, path):
    """Parse the PLY header. Returns (fmt, elements, body_offset).

    elements is a list of (name, count, [(prop_name, dtype_code), ...]).
    """
    end = data.find(b"end_header\n")
    if not data.startswith(b"ply") or end < 0:
        raise PlyParseError(f"{path}: not a PLY file (missing ply/end_header)", 0)
    body_offset = end + len(b"end_header\n")
    lines = data[:end].decode("ascii", errors="replace").splitlines()
    fmt = None
    elements = []
    for lineno, line in enumerate(lines):
        tokens = line.split()
        if not tokens or tokens[0] in ("ply", "comment", "obj_info"):
            continue
        if tokens[0] == "format":
            if len(tokens) < 3:
                raise PlyParseError(f"{path}: malformed format line", 0)
            fmt = tokens[1]
            if fmt not in ("ascii", "binary_little_endian"):
                raise PlyParseError(f"{path}: unsupported format {fmt!r}", 0)
        elif tokens[0] == "element":
            if len(tokens) != 3:
                raise PlyParseError(f"{path}: malformed element line", 0)
            try:
                count = int(tokens[2])
            except ValueError:
                raise PlyParseError(f"{path}: bad element count {tokens[2]!r}", 0)
            elements.append((tokens[1], count, []))
        elif tokens[0] == "property":
            if not elements:
                raise PlyParseError(f"{path}: property before any element", 0)
            if tokens[1] == "list":
                # list properties (e.g. face vertex indices) only supported in
                # non-vertex elements of ascii files; binary ones can't be skipped
                elements[-1][2].append((tokens[-1], "list"))
            else:
                if tokens[1] not in _PLY_SCALARS:
                    raise PlyParseError(
                        f"{path}: unknown property type {tokens[1]!r}", 0)
                elements[-1][2].append((tokens[2], _PLY_SCALARS[tokens[1]]))
    if fmt is None:
        raise PlyParseError(f"{path}: header has no format line", 0)
    return fmt, elements, body_offset


def load_ply(path) -> PointCloud:
    """Load a point cloud from an ascii or binary_little_endian PLY file.

    Requires float x,y,z vertex properties; red/green/blue uint8 properties
    are used when present, otherwise points get mid-gray.
    """
    with open(path, "rb") as f:
        data = f.read()
    fmt, elements, offset = _parse_header(data, path)
    vertex = next((e for e in elements if e[0] == "vertex"), None)
    if vertex is None:
        raise PlyParseError(f"{path}: no vertex element", 0)
    name, count, props = vertex
    prop_names = [p[0] for p in props]
    for coord in ("x", "y", "z"):
        if coord not in prop_names:
            raise PlyParseError(f"{path}: vertex element lacks property {coord!r}", 0)
    if any(code == "list" for _, code in props):
        raise PlyParseError(f"{path}: list property in vertex element", 0)
    has_color = all(c in prop_names for c in ("red", "green", "blue"))
    skipped = sum(1 for e in elements if e[0] != "vertex")
    skipped += sum(1 for p in prop_names
                   if p not in ("x", "y", "z", "red", "green", "blue"))

    if elements[0][0] != "vertex":
        raise PlyParseError(f"{path}: vertex must be the first element", offset)

    if fmt == "binary_little_endian":
        dtype = np.dtype([(p, "<" + code) for p, code in props])
        need = count * dtype.itemsize
        if len(data) - offset < need:
            raise PlyParseError(
                f"{path}: body truncated, need {need} bytes for {count} vertices",
                len(data))
        raw = np.frombuffer(data, dtype=dtype, count=count, offset=offset)
    else:
        text = data[offset:].decode("ascii", errors="replace").split()
        need = count * len(props)
        if len(text) < need:
            raise PlyParseError(
                f"{path}: body truncated, {len(text)} values for "
                f"{count}x{len(props)} expected", len(data))
        dtype = np.dtype([(p, code) for p, code in props])
        try:
            table = np.array(text[:need], dtype=np.float64).reshape(count, len(props))
        except ValueError:
            raise PlyParseError(f"{path}: non-numeric vertex data", offset)
        raw = np.zeros(count, dtype=dtype)
        for i, (p, _) in enumerate(props):
            raw[p] = table[:, i]

    xyz = np.stack([raw["x"], raw["y"], raw["z"]], axis=1).astype(np.float64)
    if has_color:
        rgb = np.stack([raw["red"], raw["green"], raw["blue"]], axis=1).astype(np.uint8)
    else:
        rgb = np.tile(np.array(DEFAULT_COLOR, dtype=np.uint8), (count, 1))
    return PointCloud(xyz, rgb, skipped=skipped)


def write_ply(cloud: PointCloud, path, binary: bool = True):
    """Write a cloud as a PLY file (float32 xyz, uint8 rgb)."""
    fmt = "binary_little_endian" if binary else "ascii"
    header = (
        "ply\n"
        f"format {fmt} 1.0\n"
        f"element vertex {len(cloud)}\n"
        "property float x\nproperty float y\nproperty float z\n"
        "property uchar red\nproperty uchar green\nproperty uchar blue\n"
        "end_header\n"
    )
    with open(path, "wb") as f:
        f.write(header.encode("ascii"))
        if binary:
            rec = np.zeros(len(cloud), dtype=np.dtype(
                [("x", "<f4"), ("y", "<f4"), ("z", "<f4"),
                 ("red", "u1"), ("green", "u1"), ("blue", "u1")]))
            for i, p in enumerate(("x", "y", "z")):
                rec[p] = cloud.xyz[:, i].astype(np.float32)
            for i, p in enumerate(("red", "green", "blue")):
                rec[p] = cloud.rgb[:, i]
            f.write(rec.tobytes())
        else:
            xyz32 = cloud.xyz.astype(np.float32)
            for i in range(len(cloud)):
                x, y, z = xyz32[i]
                r, g, b = cloud.rgb[i]
                f.write(f"{x:.9g} {y:.9g} {z:.9g} {r} {g} {b}\n".encode("ascii"))


@dataclass(frozen=True)
class RoomSpec:
    """Axis-aligned box room, points scattered on its interior faces."""

    size: tuple = (10.0, 4.0, 10.0)  # x, y, z extent in meters
    num_points: int = 50_000

    def __post_init__(self):
        if self.num_points < 1:
            raise ValueError("num_points must be >= 1")
        if any(s <= 0 for s in self.size):
            raise ValueError("room dimensions must be positive")


# one base color per face (-x, +x, -y floor, +y ceiling, -z, +z); the faces
# deliberately differ in LUMINANCE, not just hue, so grayscale descriptors
# can still tell viewing directions apart
_FACE_COLORS = np.array([
    [150, 70, 60],     # -x: dark red
    [230, 190, 90],    # +x: bright sand
    [55, 50, 45],      # floor: near-black
    [250, 250, 245],   # ceiling: near-white
    [70, 100, 170],    # -z: mid blue
    [120, 220, 140],   # +z: bright green
], dtype=np.float64)

def procedural_cloud(seed: int, spec: RoomSpec = RoomSpec()) -> PointCloud:
    """Deterministic colored box-room cloud.

    Texture comes from an aperiodic per-face sinusoid field, a brightness
    ramp across each face and seeded per-point jitter: nearby viewpoints
    produce similar images while translated or rotated ones differ, and no
    wall patch repeats elsewhere.
    """
    rng = np.random.default_rng(seed)
    n = spec.num_points
    sx, sy, sz = spec.size
    half = np.array([sx / 2.0, sy / 2.0, sz / 2.0])

    # area-weighted face choice
    areas = np.array([sy * sz, sy * sz, sx * sz, sx * sz, sx * sy, sx * sy])
    face = rng.choice(6, size=n, p=areas / areas.sum())
    uv = rng.uniform(-1.0, 1.0, size=(n, 2))

    xyz = np.empty((n, 3))
    axis = face // 2          # fixed axis of each face
    sign = np.where(face % 2 == 0, -1.0, 1.0)
    for a in range(3):
        on = axis == a
        others = [i for i in range(3) if i != a]
        xyz[on, a] = sign[on] * half[a]
        xyz[on, others[0]] = uv[on, 0] * half[others[0]]
        xyz[on, others[1]] = uv[on, 1] * half[others[1]]

    base = _FACE_COLORS[face]
    # aperiodic texture: a few sinusoids with incommensurate frequencies and
    # random phases, drawn once per face
    texture = np.zeros(n)
    for f in range(6):
        on = face == f
        if not np.any(on):
            continue
        for freq, amp in ((rng.uniform(1.0, 3.0, 2), 30.0),
                          (rng.uniform(3.0, 7.0, 2), 20.0),
                          (rng.uniform(7.0, 15.0, 2), 12.0)):
            phase = rng.uniform(0.0, 2 * np.pi)
            texture[on] += amp * np.sin(freq[0] * uv[on, 0]
                                        + freq[1] * uv[on, 1] + phase)
    ramp = 0.65 + 0.45 * (uv[:, 0] + 1.0) / 2.0   # brightness varies along the face
    jitter = rng.normal(0.0, 8.0, size=(n, 3))
    rgb = np.clip(base * ramp[:, None] + texture[:, None] + jitter,
                  0, 255).astype(np.uint8)
    # room centered at origin, floor at y = -sy/2
    return PointCloud(xyz, rgb)
