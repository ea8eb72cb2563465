"""Z-buffered point-splat rasterizer with sky-box backgrounds and shaders.

Images are (H, W, 3) uint8 numpy arrays, row 0 at the top. Rendering is
fully deterministic: points are depth-tested in index order, so equal
depths resolve to the lowest point index no matter how work is scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from PIL import Image as PilImage

from . import _kernel
from .camera import Intrinsics, pose_to_view, project_points
from .errors import ConfigError
from .geometry import Pose, euler_to_rotmat, normalize_orientation
from .pointcloud import PointCloud


@dataclass(frozen=True)
class SkyboxPreset:
    """Analytic vertical-gradient sky: horizon to zenith, flat ground."""

    horizon: tuple
    zenith: tuple
    ground: tuple


SKYBOX_PRESETS = {
    "none": SkyboxPreset((0, 0, 0), (0, 0, 0), (0, 0, 0)),
    "noon": SkyboxPreset((190, 215, 235), (80, 140, 230), (95, 110, 85)),
    "dusk": SkyboxPreset((235, 150, 90), (60, 50, 110), (70, 60, 60)),
}


@dataclass(frozen=True)
class ShaderPreset:
    """Per-pixel color transform: tint, gamma, then haze blend."""

    id: str
    tint: tuple = (1.0, 1.0, 1.0)
    gamma: float = 1.0
    haze_color: tuple = (0, 0, 0)
    haze_strength: float = 0.0

    def __post_init__(self):
        if any(t < 0 for t in self.tint) or self.haze_strength < 0:
            raise ValueError("tint and haze strength must be nonnegative")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")


SHADER_PRESETS = {
    "none": ShaderPreset("none"),
    "dusk": ShaderPreset("dusk", tint=(1.0, 0.6, 0.4), gamma=1.1),
    "fog": ShaderPreset("fog", haze_color=(200, 200, 205), haze_strength=0.35),
}


@dataclass(frozen=True)
class RenderOptions:
    splat_radius_px: float = 2.0   # radius at reference_depth
    reference_depth: float = 5.0
    max_splat_px: float = 16.0
    near_plane: float = 0.01
    skybox: str = "noon"
    shader: str = "none"

    def __post_init__(self):
        if self.splat_radius_px < 0 or self.max_splat_px < 1:
            raise ValueError("splat_radius_px must be >= 0, max_splat_px >= 1")
        if self.reference_depth <= 0 or self.near_plane <= 0:
            raise ValueError("reference_depth and near_plane must be positive")


def get_skybox(preset_id: str) -> SkyboxPreset:
    try:
        return SKYBOX_PRESETS[preset_id]
    except KeyError:
        raise ConfigError(f"unknown sky-box preset {preset_id!r}", "skybox")


def get_shader(preset_id: str) -> ShaderPreset:
    try:
        return SHADER_PRESETS[preset_id]
    except KeyError:
        raise ConfigError(f"unknown shader preset {preset_id!r}", "shader")


def fill_skybox(intr: Intrinsics, pose: Pose, preset_id: str) -> np.ndarray:
    """Background image for a camera: sky gradient above the horizon, flat
    ground color below."""
    preset = get_skybox(preset_id)
    # wrap angles first so that e.g. yaw and yaw+360 produce identical rays
    R = euler_to_rotmat(normalize_orientation(pose.orientation))
    xs = (np.arange(intr.width) - intr.cx) / intr.fx
    ys = (intr.cy - np.arange(intr.height)) / intr.fy
    dirs = np.empty((intr.height, intr.width, 3))
    dirs[..., 0] = xs[None, :]
    dirs[..., 1] = ys[:, None]
    dirs[..., 2] = 1.0
    world = dirs @ R.T
    up = world[..., 1] / np.linalg.norm(world, axis=-1)

    horizon = np.array(preset.horizon, dtype=np.float64)
    zenith = np.array(preset.zenith, dtype=np.float64)
    t = np.clip(up, 0.0, 1.0)[..., None]
    sky = horizon * (1.0 - t) + zenith * t
    img = np.where((up > 0.0)[..., None], sky,
                   np.array(preset.ground, dtype=np.float64))
    return np.clip(np.rint(img), 0, 255).astype(np.uint8)


def splat_radii(depths: np.ndarray, opts: RenderOptions) -> np.ndarray:
    """Depth-scaled disc radii, clamped to [1, max_splat_px], float32."""
    r = opts.splat_radius_px * opts.reference_depth / depths
    return np.clip(r, 1.0, opts.max_splat_px).astype(np.float32)


def splat_render(cloud: PointCloud, intr: Intrinsics, pose: Pose,
                 opts: RenderOptions = RenderOptions()) -> np.ndarray:
    """Render the cloud from a pose over its sky-box background."""
    if len(cloud) == 0:
        raise ValueError("cannot render an empty cloud")
    img = fill_skybox(intr, pose, opts.skybox)
    view = pose_to_view(pose)
    u, v, z, visible = project_points(intr, view, cloud.xyz,
                                      near_plane=opts.near_plane)
    idx = np.flatnonzero(visible)
    if idx.size:
        depth32 = z[idx].astype(np.float32)
        depth_buf = np.full((intr.height, intr.width), np.inf, dtype=np.float32)
        _kernel.splat_points(
            np.rint(u[idx]).astype(np.int32),
            np.rint(v[idx]).astype(np.int32),
            splat_radii(depth32, opts),
            depth32,
            np.ascontiguousarray(cloud.rgb[idx]),
            depth_buf,
            img,
        )
    if opts.shader != "none":
        img = apply_shader(img, get_shader(opts.shader))
    return img


def apply_shader(img: np.ndarray, preset: ShaderPreset) -> np.ndarray:
    """c' = clamp(255 * (tint * c/255)^gamma blended with haze by strength)."""
    c = img.astype(np.float64) / 255.0
    shaded = 255.0 * np.power(np.array(preset.tint) * c, preset.gamma)
    haze = np.array(preset.haze_color, dtype=np.float64)
    s = preset.haze_strength
    out = (1.0 - s) * shaded + s * haze
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def _resize_bilinear(img: np.ndarray, new_w: int, new_h: int) -> np.ndarray:
    """Bilinear resample at pixel centers (half-pixel aligned)."""
    h, w = img.shape[:2]
    if (new_w, new_h) == (w, h):
        return img.copy()
    src_x = (np.arange(new_w) + 0.5) * (w / new_w) - 0.5
    src_y = (np.arange(new_h) + 0.5) * (h / new_h) - 0.5
    x0 = np.clip(np.floor(src_x).astype(np.int64), 0, w - 1)
    y0 = np.clip(np.floor(src_y).astype(np.int64), 0, h - 1)
    x1 = np.clip(x0 + 1, 0, w - 1)
    y1 = np.clip(y0 + 1, 0, h - 1)
    fx = np.clip(src_x - x0, 0.0, 1.0)
    fy = np.clip(src_y - y0, 0.0, 1.0)

    pix = img.astype(np.float64)
    top = pix[y0[:, None], x0[None, :]] * (1 - fx)[None, :, None] \
        + pix[y0[:, None], x1[None, :]] * fx[None, :, None]
    bot = pix[y1[:, None], x0[None, :]] * (1 - fx)[None, :, None] \
        + pix[y1[:, None], x1[None, :]] * fx[None, :, None]
    out = top * (1 - fy)[:, None, None] + bot * fy[:, None, None]
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def center_crop_resize(img: np.ndarray, target_w: int, target_h: int) -> np.ndarray:
    """Isotropic rescale until the image covers the target, then center crop.

    Preserves field of view along the tighter axis and never mirrors.
    """
    if target_w < 1 or target_h < 1:
        raise ValueError("target dimensions must be >= 1")
    h, w = img.shape[:2]
    scale = max(target_w / w, target_h / h)
    if target_w / w >= target_h / h:
        new_w, new_h = target_w, max(target_h, int(round(h * scale)))
    else:
        new_w, new_h = max(target_w, int(round(w * scale))), target_h
    resized = _resize_bilinear(img, new_w, new_h)
    x0 = (new_w - target_w) // 2
    y0 = (new_h - target_h) // 2
    return resized[y0:y0 + target_h, x0:x0 + target_w].copy()


def save_png(img: np.ndarray, path):
    PilImage.fromarray(img, mode="RGB").save(path, format="PNG")


def load_png(path) -> np.ndarray:
    with PilImage.open(path) as im:
        return np.asarray(im.convert("RGB"))
