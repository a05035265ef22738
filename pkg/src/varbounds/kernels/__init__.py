"""Moment-computation kernels: compiled core with a pure-numpy fallback.

The compiled extension is used when importable; set ``VARBOUNDS_PURE=1`` to
force the numpy implementation (used by the benchmark and equivalence tests).
"""

import os

from . import _fallback

if os.environ.get("VARBOUNDS_PURE"):
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _core as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _fallback
        BACKEND = "python"

state_moments = _impl.state_moments
pure_state_moments = _impl.pure_state_moments

__all__ = ["BACKEND", "state_moments", "pure_state_moments", "_fallback"]
