"""Select the kernel implementation at import time.

The compiled extension is used when it was built; set ``MSTC_PURE_PYTHON=1``
to force the pure-Python kernels (useful for debugging and benchmarking).
"""
import os

from . import _kernels_py

kernels = _kernels_py
BACKEND = "python"

if not os.environ.get("MSTC_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        kernels = _compiled
        BACKEND = "cython"

__all__ = ["kernels", "BACKEND"]
