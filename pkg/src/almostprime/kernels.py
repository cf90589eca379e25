"""Backend selection for the hot loops.

The compiled extension is used when it was built; otherwise the numpy
fallback.  Setting ``ALMOSTPRIME_PURE_PYTHON=1`` forces the fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("ALMOSTPRIME_PURE_PYTHON"):
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

if _compiled is not None:
    factor_segment = _compiled.factor_segment
    first_hits = _compiled.first_hits
    BACKEND = "cython"
else:
    factor_segment = _pykernels.factor_segment
    first_hits = _pykernels.first_hits
    BACKEND = "python"


def available_backends() -> dict:
    """Map backend name to its kernel module; used by tests and benchmarks."""
    out = {"python": _pykernels}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        out["cython"] = _kernels
    return out
