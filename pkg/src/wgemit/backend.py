"""Kernel backend selection.

The compiled Cython extension is preferred when importable; the numpy
implementation is the fallback.  Set WGEMIT_PURE_PYTHON=1 to force the
fallback (useful for benchmarking and debugging).
"""
import os

if os.environ.get("WGEMIT_PURE_PYTHON") == "1":
    from . import _purepy as _impl

    HAVE_SPEEDUPS = False
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]

        HAVE_SPEEDUPS = True
    except ImportError:
        from . import _purepy as _impl

        HAVE_SPEEDUPS = False

BACKEND_NAME = "compiled" if HAVE_SPEEDUPS else "python"

slab_residual = _impl.slab_residual
slab_residual_arr = _impl.slab_residual_arr
slab_scan_bracket = _impl.slab_scan_bracket
slab_solve_bracket = _impl.slab_solve_bracket
stack_rs_rp = _impl.stack_rs_rp
