"""Pick the kernel implementation at import time.

The compiled extension is preferred; set ``SLOTMC_PURE_PYTHON=1`` to force
the pure-Python kernels.
"""
import os

from . import _purepy

if os.environ.get("SLOTMC_PURE_PYTHON", "") not in ("", "0"):
    kernels = _purepy
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels
        BACKEND = "compiled"
    except ImportError:
        kernels = _purepy
        BACKEND = "python"

CAP_EXCEEDED = _purepy.CAP_EXCEEDED
