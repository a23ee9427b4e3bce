"""Kernel backend selection.

The compiled ``_kernels`` extension is used when it imports; otherwise the
pure-Python ``_kernels_py`` module is used. DUNKL_APPROX_BACKEND=python
forces the fallback, DUNKL_APPROX_BACKEND=compiled makes a missing
extension an ImportError instead of a silent fallback.
"""

import os

from . import _kernels_py

_choice = os.environ.get("DUNKL_APPROX_BACKEND", "auto").lower()

if _choice == "python":
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        if _choice == "compiled":
            raise
        kernels = _kernels_py

BACKEND = "python" if kernels is _kernels_py else "compiled"
