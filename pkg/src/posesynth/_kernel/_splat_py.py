"""Pure-Python (numpy) splat rasterization kernel.

Fallback for environments where the Cython extension is unavailable. Same
contract as the compiled kernel: points are processed in index order with a
strict depth test, so on equal depths the lowest index wins.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def splat_points(u, v, radius, depth, rgb, depth_buf, image):
    """Paint depth-tested discs into image/depth_buf in place.

    u, v        (N,) int32 rounded pixel centers
    radius      (N,) float32 disc radii in pixels
    depth       (N,) float32 camera-space depths
    rgb         (N, 3) uint8 point colors
    depth_buf   (H, W) float32, prefilled with +inf
    image       (H, W, 3) uint8 target
    """
    h, w = depth_buf.shape
    n = u.shape[0]
    for i in range(n):
        r = np.float32(radius[i])
        ri = int(np.ceil(r))
        x0 = max(0, u[i] - ri)
        x1 = min(w - 1, u[i] + ri)
        y0 = max(0, v[i] - ri)
        y1 = min(h - 1, v[i] + ri)
        if x0 > x1 or y0 > y1:
            continue
        z = depth[i]
        ys = np.arange(y0, y1 + 1) - v[i]
        xs = np.arange(x0, x1 + 1) - u[i]
        # square the radius in float32 to match the compiled kernel exactly
        disc = (ys[:, None] ** 2 + xs[None, :] ** 2) <= float(r * r)
        win = depth_buf[y0:y1 + 1, x0:x1 + 1]
        hit = disc & (z < win)
        win[hit] = z
        image[y0:y1 + 1, x0:x1 + 1][hit] = rgb[i]
