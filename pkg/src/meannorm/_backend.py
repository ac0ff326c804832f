"""Pick the kernel implementation once, at import."""
import os

if os.environ.get("MEANNORM_PURE_PYTHON"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        from . import _kernels_py as kernels

BACKEND = "python" if kernels.__name__.endswith("_kernels_py") else "cython"

__all__ = ["BACKEND", "kernels"]
