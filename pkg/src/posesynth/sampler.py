"""Virtual-camera pose enumeration: translation grid x orientation sphere.

Defaults (1 m grid step, 1.6 m camera height, 8 yaw headings, pitches
{-10, 0, +10}, roll 0) approximate handheld capture density.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError
from .geometry import Pose, normalize_orientation
from .pointcloud import Aabb

MAX_POSES = 10_000_000


@dataclass(frozen=True)
class GridSpec:
    origin: np.ndarray          # grid corner (x, y, z); y is ignored in favor of height_y
    step_x: float = 1.0
    step_z: float = 1.0
    count_x: int = 1
    count_z: int = 1
    height_y: float = 1.6

    def __post_init__(self):
        origin = np.asarray(self.origin, dtype=np.float64)
        if origin.shape != (3,):
            raise ValueError("origin must be a 3-vector")
        if self.step_x <= 0 or self.step_z <= 0:
            raise ValueError("grid steps must be positive")
        if self.count_x < 1 or self.count_z < 1:
            raise ValueError("grid counts must be >= 1")
        object.__setattr__(self, "origin", origin)

    @staticmethod
    def centered_on(bounds: Aabb, step_x: float = 1.0, step_z: float = 1.0,
                    height_y: float = 1.6) -> "GridSpec":
        """Grid covering the cloud footprint, centered, one node per step."""
        ex, _, ez = bounds.extent
        count_x = max(1, int(round(ex / step_x)))
        count_z = max(1, int(round(ez / step_z)))
        span_x = (count_x - 1) * step_x
        span_z = (count_z - 1) * step_z
        cx, _, cz = bounds.center
        origin = np.array([cx - span_x / 2.0, 0.0, cz - span_z / 2.0])
        return GridSpec(origin, step_x, step_z, count_x, count_z, height_y)


@dataclass(frozen=True)
class OrientationSpec:
    yaw_count: int = 8
    pitch_values: tuple = (-10.0, 0.0, 10.0)
    roll: float = 0.0

    def __post_init__(self):
        if self.yaw_count < 1:
            raise ValueError("yaw_count must be >= 1")
        pitches = tuple(float(p) for p in self.pitch_values)
        if not pitches:
            raise ValueError("pitch_values must be nonempty")
        if any(not -90.0 <= p <= 90.0 for p in pitches):
            raise ValueError("pitch values must lie in [-90, 90]")
        object.__setattr__(self, "pitch_values", pitches)


def grid_positions(spec: GridSpec) -> np.ndarray:
    """Row-major (count_x * count_z, 3) positions; x varies slowest."""
    xs = spec.origin[0] + spec.step_x * np.arange(spec.count_x)
    zs = spec.origin[2] + spec.step_z * np.arange(spec.count_z)
    gx, gz = np.meshgrid(xs, zs, indexing="ij")
    out = np.empty((spec.count_x * spec.count_z, 3))
    out[:, 0] = gx.ravel()
    out[:, 1] = spec.origin[1] + spec.height_y
    out[:, 2] = gz.ravel()
    return out


def orientation_sphere(spec: OrientationSpec) -> np.ndarray:
    """Normalized (pitch, yaw, roll) triples: yaw headings nested per pitch."""
    yaws = 360.0 * np.arange(spec.yaw_count) / spec.yaw_count
    out = []
    for pitch in spec.pitch_values:
        for yaw in yaws:
            out.append(normalize_orientation((pitch, yaw, spec.roll)))
    return np.array(out)


def enumerate_poses(grid: GridSpec, orient: OrientationSpec,
                    max_poses: int = MAX_POSES) -> list[Pose]:
    """Cartesian product of grid positions and orientations, grid-major."""
    positions = grid_positions(grid)
    orientations = orientation_sphere(orient)
    total = len(positions) * len(orientations)
    if total > max_poses:
        raise CapacityError(
            f"{total} poses exceeds the cap of {max_poses}")
    return [Pose(p, o) for p in positions for o in orientations]
