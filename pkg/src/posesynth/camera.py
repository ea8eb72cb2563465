"""Pinhole camera model: intrinsics, view transforms, point projection.

Image coordinates: u grows rightward, v grows downward, row 0 is the top of
the image. The camera looks down its +Z axis with +Y up in camera space, so
v = cy - fy * Y/Z (points above the optical axis land in upper rows).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Pose, check_rotmat, euler_to_rotmat

DEFAULT_NEAR_PLANE = 0.01


@dataclass(frozen=True)
class Intrinsics:
    fx: float
    fy: float
    cx: float
    cy: float
    width: int
    height: int

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be >= 1")
        if self.fx <= 0 or self.fy <= 0:
            raise ValueError("focal lengths must be positive")
        if not (0 <= self.cx < self.width and 0 <= self.cy < self.height):
            raise ValueError("principal point must lie inside the sensor")

    def to_dict(self) -> dict:
        return {
            "fx": self.fx,
            "fy": self.fy,
            "cx": self.cx,
            "cy": self.cy,
            "width": self.width,
            "height": self.height,
        }

    @staticmethod
    def from_dict(d: dict) -> "Intrinsics":
        return Intrinsics(
            fx=float(d["fx"]),
            fy=float(d["fy"]),
            cx=float(d["cx"]),
            cy=float(d["cy"]),
            width=int(d["width"]),
            height=int(d["height"]),
        )


def intrinsics_from_fov(fov_deg: float, width: int, height: int) -> Intrinsics:
    """Intrinsics for a given vertical field of view, square pixels, centered."""
    if not (0.0 < fov_deg < 180.0):
        raise ValueError(f"fov must be in (0, 180) degrees, got {fov_deg}")
    fy = (height / 2.0) / math.tan(math.radians(fov_deg) / 2.0)
    return Intrinsics(fx=fy, fy=fy, cx=width / 2.0, cy=height / 2.0,
                      width=width, height=height)


def scale_intrinsics(intr: Intrinsics, new_w: int, new_h: int) -> Intrinsics:
    """Rescale intrinsics to a new sensor resolution."""
    if new_w < 1 or new_h < 1:
        raise ValueError("target dimensions must be >= 1")
    sx = new_w / intr.width
    sy = new_h / intr.height
    return Intrinsics(fx=intr.fx * sx, fy=intr.fy * sy,
                      cx=intr.cx * sx, cy=intr.cy * sy,
                      width=new_w, height=new_h)


@dataclass(frozen=True)
class ViewTransform:
    """4x4 homogeneous world-to-camera transform."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.shape != (4, 4):
            raise ValueError("view transform must be 4x4")
        check_rotmat(m[:3, :3], tol=1e-8)
        if not np.array_equal(m[3], [0.0, 0.0, 0.0, 1.0]):
            raise ValueError("last row must be (0, 0, 0, 1)")
        object.__setattr__(self, "matrix", m)

    def apply(self, points: np.ndarray) -> np.ndarray:
        """World points (N,3) or (3,) to camera coordinates."""
        pts = np.asarray(points, dtype=np.float64)
        return pts @ self.matrix[:3, :3].T + self.matrix[:3, 3]

    def inverse_apply(self, points: np.ndarray) -> np.ndarray:
        """Camera coordinates back to world points."""
        pts = np.asarray(points, dtype=np.float64)
        R = self.matrix[:3, :3]
        t = self.matrix[:3, 3]
        return (pts - t) @ R


def pose_to_view(pose: Pose) -> ViewTransform:
    """World-to-camera transform: x_cam = R^T (x_world - t)."""
    R = euler_to_rotmat(pose.orientation)
    m = np.eye(4)
    m[:3, :3] = R.T
    m[:3, 3] = -R.T @ pose.position
    return ViewTransform(m)


def project(intr: Intrinsics, view: ViewTransform, point,
            near_plane: float = DEFAULT_NEAR_PLANE):
    """Project one world point to (u, v, depth), or None if outside the frustum."""
    X, Y, Z = view.apply(np.asarray(point, dtype=np.float64))
    if Z <= near_plane:
        return None
    u = intr.fx * X / Z + intr.cx
    v = intr.cy - intr.fy * Y / Z
    if not (0.0 <= u < intr.width and 0.0 <= v < intr.height):
        return None
    return u, v, Z


def project_points(intr: Intrinsics, view: ViewTransform, points: np.ndarray,
                   near_plane: float = DEFAULT_NEAR_PLANE):
    """Vectorized projection of (N,3) world points.

    Returns (u, v, depth, visible) arrays of length N; u/v/depth are only
    meaningful where visible is True.
    """
    cam = view.apply(points)
    Z = cam[:, 2]
    with np.errstate(divide="ignore", invalid="ignore"):
        u = intr.fx * cam[:, 0] / Z + intr.cx
        v = intr.cy - intr.fy * cam[:, 1] / Z
    visible = (Z > near_plane) & (u >= 0.0) & (u < intr.width) \
        & (v >= 0.0) & (v < intr.height)
    return u, v, Z, visible
