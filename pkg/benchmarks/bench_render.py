#!/usr/bin/env python3
"""Benchmark the compiled splat kernel against the pure-numpy fallback.

Usage: python3 benchmarks/bench_render.py [--points N] [--frames N]

Renders the same pose sweep through both kernels and reports images/s plus
a bit-identity check between the two outputs.
"""

import argparse
import time

import numpy as np

from posesynth import _kernel
from posesynth._kernel import _splat_py
from posesynth.camera import intrinsics_from_fov
from posesynth.geometry import Pose
from posesynth.pointcloud import RoomSpec, procedural_cloud
from posesynth.renderer import RenderOptions, splat_render


def run(cloud, intr, poses, opts):
    images = []
    start = time.perf_counter()
    for pose in poses:
        images.append(splat_render(cloud, intr, pose, opts))
    return time.perf_counter() - start, images


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--points", type=int, default=200_000)
    parser.add_argument("--frames", type=int, default=10)
    parser.add_argument("--size", type=int, default=224)
    args = parser.parse_args()

    cloud = procedural_cloud(9, RoomSpec((12.0, 5.0, 12.0), args.points))
    intr = intrinsics_from_fov(90, args.size, args.size)
    opts = RenderOptions(skybox="noon")
    poses = [Pose(np.zeros(3), np.array([0.0, 360.0 * i / args.frames, 0.0]))
             for i in range(args.frames)]

    if _kernel.backend_name() != "cython":
        print("compiled kernel not available; benchmarking fallback only")
        elapsed, _ = run(cloud, intr, poses, opts)
        print(f"python : {args.frames / elapsed:8.2f} images/s")
        return

    compiled = _kernel.splat_points
    splat_render(cloud, intr, poses[0], opts)  # warm up
    t_cy, imgs_cy = run(cloud, intr, poses, opts)

    _kernel.splat_points = _splat_py.splat_points
    try:
        t_py, imgs_py = run(cloud, intr, poses, opts)
    finally:
        _kernel.splat_points = compiled

    identical = all(np.array_equal(a, b) for a, b in zip(imgs_cy, imgs_py))
    print(f"{args.points} points, {args.size}x{args.size}, "
          f"{args.frames} frames")
    print(f"cython : {args.frames / t_cy:8.2f} images/s")
    print(f"python : {args.frames / t_py:8.2f} images/s")
    print(f"speedup: {t_py / t_cy:8.1f}x")
    print(f"outputs bit-identical: {identical}")


if __name__ == "__main__":
    main()
