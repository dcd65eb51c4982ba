"""Backend selection for the hot loops.

The compiled extension ``radialbc._kernels`` is used when importable; otherwise
the pure-Python module is used. Set ``RADIALBC_PURE_PYTHON=1`` to force the
fallback (the test-suite uses this to check both backends agree).
"""

import os

from . import _kernels_py

if os.environ.get("RADIALBC_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "compiled" if _impl is not _kernels_py else "python"

numerov = _impl.numerov
sturm_count = _impl.sturm_count

__all__ = ["BACKEND", "numerov", "sturm_count"]
