"""Kernel selection: compiled extension when available, numpy otherwise.

Set SLICEREPAIR_PURE=1 to force the numpy implementation (used by the
benchmark and the equivalence tests).
"""

import os

from . import _kernels_py

if os.environ.get("SLICEREPAIR_PURE") == "1":
    _impl = _kernels_py
    BACKEND = "numpy"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "numpy"

edge_counts = _impl.edge_counts
segment_mean_forward = _impl.segment_mean_forward
segment_mean_backward = _impl.segment_mean_backward
