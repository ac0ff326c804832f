import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # the pure-Python kernels take over at import time
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("MEANNORM_NO_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "meannorm._kernels",
                ["src/meannorm/_kernels.pyx"],
                # no -ffast-math: it would reassociate the compensated sums
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

setup(ext_modules=ext_modules)
