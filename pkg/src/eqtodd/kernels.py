"""Kernel selection.

The compiled extension is used when it was built; otherwise, or when
``EQTODD_PURE_PYTHON`` is set to a non-empty value, the pure-Python
implementation is used.  ``BACKEND`` names the active one.
"""
import os

from . import _kernels_py

if os.environ.get("EQTODD_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _kernels_py
        BACKEND = "python"

mul_terms = _impl.mul_terms

__all__ = ["BACKEND", "mul_terms"]
