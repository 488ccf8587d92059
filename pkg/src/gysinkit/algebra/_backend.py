"""Pick the elimination kernel at import time.

The compiled kernel is used when it imports cleanly. Setting
``GYSINKIT_BACKEND=python`` forces the pure-Python fallback.
"""

from __future__ import annotations

import os

from . import _elim_py

python_kernel = _elim_py

try:
    from . import _elim as compiled_kernel
except ImportError:  # extension not built
    compiled_kernel = None

if compiled_kernel is not None and os.environ.get("GYSINKIT_BACKEND", "").lower() != "python":
    kernel = compiled_kernel
    BACKEND = "cython"
else:
    kernel = _elim_py
    BACKEND = "python"
