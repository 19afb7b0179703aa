"""JIT switch.

Kernels are decorated with :func:`njit` from here. Setting
``WEBSCRAPER_DISABLE_JIT=1`` (or running without numba installed) turns the
decorator into a no-op and callers fall back to the pure-numpy paths.
"""

from __future__ import annotations

import os

_DISABLED = os.environ.get("WEBSCRAPER_DISABLE_JIT", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError("JIT disabled by WEBSCRAPER_DISABLE_JIT")
    from numba import njit

    JIT_ENABLED = True
except ImportError:
    JIT_ENABLED = False

    def njit(func=None, **kwargs):
        if func is not None:
            return func

        def wrapper(f):
            return f

        return wrapper


__all__ = ["JIT_ENABLED", "njit"]
