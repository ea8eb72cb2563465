"""Independent brute-force oracles used by the test suite.

These deliberately avoid the library's production code paths: the painter
renderer re-derives projection and splatting by sorting and overpainting,
the quaternion routines compute geodesic angles without rotation matrices,
and the reference resampler goes through scipy.
"""

import math

import numpy as np
from scipy import ndimage

from posesynth.renderer import fill_skybox


# --- quaternion oracle (w, x, y, z) ---

def _axis_quat(axis, deg):
    half = math.radians(deg) / 2.0
    s = math.sin(half)
    return np.array([math.cos(half),
                     axis[0] * s, axis[1] * s, axis[2] * s])


def _quat_mul(a, b):
    w1, x1, y1, z1 = a
    w2, x2, y2, z2 = b
    return np.array([
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
        w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
    ])


def euler_to_quat(orientation):
    """yaw about Y, then pitch about X, then roll about Z (intrinsic)."""
    pitch, yaw, roll = orientation
    qy = _axis_quat((0, 1, 0), yaw)
    qx = _axis_quat((1, 0, 0), pitch)
    qz = _axis_quat((0, 0, 1), roll)
    return _quat_mul(_quat_mul(qy, qx), qz)


def quat_geodesic_deg(a, b):
    qa = euler_to_quat(a)
    qb = euler_to_quat(b)
    d = min(1.0, abs(float(np.dot(qa, qb))))
    return math.degrees(2.0 * math.acos(d))


# --- elementary-rotation product oracle ---

def brute_force_rotmat(orientation):
    pitch, yaw, roll = (math.radians(v) for v in orientation)
    ry = np.array([[math.cos(yaw), 0, math.sin(yaw)],
                   [0, 1, 0],
                   [-math.sin(yaw), 0, math.cos(yaw)]])
    rx = np.array([[1, 0, 0],
                   [0, math.cos(pitch), -math.sin(pitch)],
                   [0, math.sin(pitch), math.cos(pitch)]])
    rz = np.array([[math.cos(roll), -math.sin(roll), 0],
                   [math.sin(roll), math.cos(roll), 0],
                   [0, 0, 1]])
    return ry @ rx @ rz


# --- painter's-algorithm splat renderer ---

def painter_render(cloud, intr, pose, opts):
    """Depth-sort points far to near and overpaint discs sequentially.

    On equal depths the lowest point index is painted last, matching the
    z-buffer renderer's lowest-index-wins tie break. Projection is shared
    with the library (its correctness is tested separately); this oracle
    independently re-derives visibility resolution and splat rasterization.
    """
    from posesynth.camera import pose_to_view, project_points

    img = fill_skybox(intr, pose, opts.skybox)
    u, v, z, visible = project_points(intr, pose_to_view(pose), cloud.xyz,
                                      near_plane=opts.near_plane)
    idx = np.flatnonzero(visible)
    depth32 = z[idx].astype(np.float32)
    # far to near; equal depths ordered by descending index
    order = np.lexsort((-idx, -depth32))
    for k in order:
        i = idx[k]
        d = depth32[k]
        r = np.float32(np.clip(
            opts.splat_radius_px * opts.reference_depth / d,
            1.0, opts.max_splat_px))
        cu = int(np.rint(u[i]))
        cv = int(np.rint(v[i]))
        ri = int(np.ceil(r))
        r2 = float(r * r)
        for y in range(max(0, cv - ri), min(intr.height - 1, cv + ri) + 1):
            for x in range(max(0, cu - ri), min(intr.width - 1, cu + ri) + 1):
                if (x - cu) ** 2 + (y - cv) ** 2 <= r2:
                    img[y, x] = cloud.rgb[i]
    return img


# --- reference bilinear resampler ---

def reference_resize(img, new_w, new_h):
    """Half-pixel-aligned bilinear resize via scipy map_coordinates."""
    h, w = img.shape[:2]
    src_y = (np.arange(new_h) + 0.5) * (h / new_h) - 0.5
    src_x = (np.arange(new_w) + 0.5) * (w / new_w) - 0.5
    yy, xx = np.meshgrid(src_y, src_x, indexing="ij")
    out = np.empty((new_h, new_w, 3))
    for c in range(3):
        out[..., c] = ndimage.map_coordinates(
            img[..., c].astype(np.float64), [yy, xx], order=1, mode="nearest")
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)
