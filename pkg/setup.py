"""Build the optional Cython rasterization kernel.

If Cython or a C compiler is unavailable the package still installs; the
renderer then falls back to the pure-numpy kernel (much slower, same output).
"""

from setuptools import Extension, setup

extensions = []
try:
    import numpy
    from Cython.Build import cythonize

    extensions = cythonize([
        Extension(
            "posesynth._kernel._splat_cy",
            ["src/posesynth/_kernel/_splat_cy.pyx"],
            include_dirs=[numpy.get_include()],
        ),
    ])
except ImportError:
    pass

setup(ext_modules=extensions)
