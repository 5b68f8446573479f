"""Kernel selection: the compiled ``_core`` when importable, else ``_pycore``.

Set ``EXPSUM_PURE_PYTHON=1`` to force the fallback.
"""
import os

COMPILED = False
if os.environ.get("EXPSUM_PURE_PYTHON", "") not in ("", "0"):
    from . import _pycore as kernels
else:
    try:
        from . import _core as kernels

        COMPILED = True
    except ImportError:  # extension not built
        from . import _pycore as kernels

from . import _pycore as pure_kernels

__all__ = ["kernels", "pure_kernels", "COMPILED"]
