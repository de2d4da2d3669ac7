"""Kernel selection: compiled extension when importable, numpy fallback otherwise.

Set ``RANDASSIGN_BACKEND=python`` to force the fallback.
"""

import os

from . import _kernels_py

python_kernels = _kernels_py

try:
    from . import _kernels as compiled_kernels
except ImportError:  # extension not built
    compiled_kernels = None

if compiled_kernels is not None and os.environ.get("RANDASSIGN_BACKEND", "").lower() != "python":
    kernels = compiled_kernels
    BACKEND = "cython"
else:
    kernels = python_kernels
    BACKEND = "python"

lap_min = kernels.lap_min
greedy_max = kernels.greedy_max
