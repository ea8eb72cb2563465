# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled splat rasterization kernel.

Points are processed in index order with a strict depth test, so on equal
depths the lowest index wins. Must stay behavior-identical to _splat_py.
"""

from libc.math cimport ceil

import numpy as np

BACKEND = "cython"


def splat_points(int[::1] u, int[::1] v, float[::1] radius, float[::1] depth,
                 unsigned char[:, ::1] rgb, float[:, ::1] depth_buf,
                 unsigned char[:, :, ::1] image):
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t h = depth_buf.shape[0]
    cdef Py_ssize_t w = depth_buf.shape[1]
    cdef Py_ssize_t i, x, y, x0, x1, y0, y1
    cdef int ri
    cdef float r, r2, z
    cdef long dx, dy
    with nogil:
        for i in range(n):
            r = radius[i]
            r2 = r * r
            ri = <int>ceil(r)
            x0 = u[i] - ri
            x1 = u[i] + ri
            y0 = v[i] - ri
            y1 = v[i] + ri
            if x0 < 0:
                x0 = 0
            if y0 < 0:
                y0 = 0
            if x1 > w - 1:
                x1 = w - 1
            if y1 > h - 1:
                y1 = h - 1
            z = depth[i]
            for y in range(y0, y1 + 1):
                dy = y - v[i]
                for x in range(x0, x1 + 1):
                    dx = x - u[i]
                    if dx * dx + dy * dy <= r2:
                        if z < depth_buf[y, x]:
                            depth_buf[y, x] = z
                            image[y, x, 0] = rgb[i, 0]
                            image[y, x, 1] = rgb[i, 1]
                            image[y, x, 2] = rgb[i, 2]
