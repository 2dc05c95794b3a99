"""Build script for the optional Cython kernels.

The package works without a compiler: if the extension cannot be built,
``sdlab`` falls back to its pure-Python kernels at import time.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("SDLAB_NO_EXT", "") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "sdlab._kernels",
                    ["src/sdlab/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
