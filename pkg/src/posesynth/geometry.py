"""Pose representation, Euler/rotation-matrix conversions and pose metrics.

Conventions used project-wide:

* Orientation is (pitch, yaw, roll) in degrees, applied intrinsically as
  yaw about +Y, then pitch about +X, then roll about +Z (right-handed,
  Y-up): ``R = R_y(yaw) @ R_x(pitch) @ R_z(roll)``.
* Normalized angles satisfy pitch in [-90, 90] and yaw, roll in (-180, 180].
* Positions are meters, angles degrees, throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

ORTHO_TOL = 1e-9
GIMBAL_TOL = 1e-9


def _check_finite(values, name):
    arr = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite, got {values!r}")
    return arr


def wrap_angle(deg):
    """Wrap an angle (or array of angles) into (-180, 180]."""
    wrapped = np.mod(np.asarray(deg, dtype=np.float64), 360.0)
    wrapped = np.where(wrapped > 180.0, wrapped - 360.0, wrapped)
    # -0.0 and the open end of the interval: map exactly -180 to +180
    wrapped = np.where(wrapped == -180.0, 180.0, wrapped)
    if np.ndim(deg) == 0:
        return float(wrapped)
    return wrapped


@dataclass(frozen=True)
class Pose:
    """6-DOF camera pose: position (m) + orientation (pitch, yaw, roll, deg)."""

    position: np.ndarray
    orientation: np.ndarray

    def __post_init__(self):
        pos = _check_finite(self.position, "position")
        ori = _check_finite(self.orientation, "orientation")
        if pos.shape != (3,) or ori.shape != (3,):
            raise ValueError("position and orientation must be 3-vectors")
        object.__setattr__(self, "position", pos)
        object.__setattr__(self, "orientation", ori)

    def normalized(self) -> "Pose":
        return Pose(self.position, normalize_orientation(self.orientation))

    def as_vector(self) -> np.ndarray:
        """[x, y, z, pitch, yaw, roll] as a 6-vector."""
        return np.concatenate([self.position, self.orientation])

    @staticmethod
    def from_vector(vec) -> "Pose":
        vec = _check_finite(vec, "pose vector")
        if vec.shape != (6,):
            raise ValueError("pose vector must have 6 components")
        return Pose(vec[:3], vec[3:])


@dataclass(frozen=True)
class LossWeights:
    """Per-component weights for the weighted pose loss. Default all ones."""

    w: np.ndarray = field(default_factory=lambda: np.ones(6))

    def __post_init__(self):
        w = _check_finite(self.w, "weights")
        if w.shape != (6,):
            raise ValueError("weights must have 6 components")
        if np.any(w < 0):
            raise ValueError(f"weights must be nonnegative, got {w}")
        object.__setattr__(self, "w", w)


def _rot_x(deg):
    c, s = math.cos(math.radians(deg)), math.sin(math.radians(deg))
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def _rot_y(deg):
    c, s = math.cos(math.radians(deg)), math.sin(math.radians(deg))
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def _rot_z(deg):
    c, s = math.cos(math.radians(deg)), math.sin(math.radians(deg))
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def euler_to_rotmat(orientation) -> np.ndarray:
    """Rotation matrix for (pitch, yaw, roll) degrees: R_y(yaw) R_x(pitch) R_z(roll)."""
    pitch, yaw, roll = _check_finite(orientation, "orientation")
    return _rot_y(yaw) @ _rot_x(pitch) @ _rot_z(roll)


def check_rotmat(R, tol=ORTHO_TOL):
    R = np.asarray(R, dtype=np.float64)
    if R.shape != (3, 3):
        raise ValueError("rotation matrix must be 3x3")
    if not np.allclose(R.T @ R, np.eye(3), atol=tol):
        raise ValueError("matrix is not orthonormal")
    if abs(np.linalg.det(R) - 1.0) > 1e-6:
        raise ValueError("matrix determinant is not +1")
    return R


def rotmat_to_euler(R) -> tuple[np.ndarray, bool]:
    """Recover (pitch, yaw, roll) degrees from a rotation matrix.

    Returns (orientation, gimbal_lock). At |pitch| = 90 the yaw/roll split is
    ambiguous; the canonical solution with roll = 0 is returned and flagged.
    """
    R = check_rotmat(R)
    sp = -R[1, 2]
    sp = min(1.0, max(-1.0, sp))
    pitch = math.degrees(math.asin(sp))
    if 1.0 - abs(sp) < GIMBAL_TOL:
        # cos(pitch) ~ 0: with roll fixed at 0, R[0,0]=cos(yaw), R[0,1]=sin(yaw)*sign(sp)
        yaw = math.degrees(math.atan2(math.copysign(1.0, sp) * R[0, 1], R[0, 0]))
        return np.array([pitch, wrap_angle(yaw), 0.0]), True
    yaw = math.degrees(math.atan2(R[0, 2], R[2, 2]))
    roll = math.degrees(math.atan2(R[1, 0], R[1, 1]))
    return np.array([pitch, wrap_angle(yaw), wrap_angle(roll)]), False


def normalize_orientation(orientation) -> np.ndarray:
    """Equivalent orientation with pitch in [-90, 90] and yaw, roll in (-180, 180]."""
    ori = _check_finite(orientation, "orientation")
    pitch, yaw, roll = wrap_angle(ori)
    if -90.0 <= pitch <= 90.0:
        return np.array([pitch, yaw, roll])
    angles, _ = rotmat_to_euler(euler_to_rotmat(ori))
    return angles


def geodesic_angle(a, b) -> float:
    """Minimal rotation angle in degrees between two orientations; in [0, 180]."""
    Ra = euler_to_rotmat(a)
    Rb = euler_to_rotmat(b)
    cos_theta = (np.trace(Ra.T @ Rb) - 1.0) / 2.0
    cos_theta = min(1.0, max(-1.0, cos_theta))
    return math.degrees(math.acos(cos_theta))


def pose_loss(pred: Pose, gt: Pose, weights: LossWeights | None = None) -> float:
    """Weighted Euclidean distance between two poses.

    Angle differences are wrapped into (-180, 180] before weighting, so a
    179 vs -179 yaw disagreement costs 2 degrees, not 358.
    """
    if weights is None:
        weights = LossWeights()
    dp = pred.position - gt.position
    da = wrap_angle(pred.orientation - gt.orientation)
    diff = np.concatenate([dp, da])
    return float(np.linalg.norm(weights.w * diff))
