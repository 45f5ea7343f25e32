"""Hot kernels: compiled Cython module with a numpy fallback.

Set ``EISENQE_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _reference

BACKEND = "python"
if os.environ.get("EISENQE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _reference
else:
    _impl = _reference

k_bessel_log = _impl.k_bessel_log
cosine_sum = _impl.cosine_sum

__all__ = ["BACKEND", "k_bessel_log", "cosine_sum"]
