"""Rasterization kernel selection.

Prefers the compiled Cython kernel; falls back to the pure-numpy one when
the extension was not built. Both implement the identical contract, and the
test suite asserts they produce byte-identical images.
"""

try:
    from ._splat_cy import BACKEND, splat_points
except ImportError:  # extension not built; use the slow path
    from ._splat_py import BACKEND, splat_points

from . import _splat_py


def backend_name() -> str:
    """Name of the active kernel: "cython" or "python"."""
    return BACKEND


__all__ = ["splat_points", "backend_name", "BACKEND"]
