#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Runs the two hot paths (mode census and the total-rate quadrature) with each
backend implementation patched in, and reports per-call times.  Usage:

    python benchmarks/bench_backends.py [repeats]
"""
import sys
import time

import wgemit
from wgemit import _purepy, backend
from wgemit.types import DipoleEmitter, OpticalContext, WaveguideStack

try:
    from wgemit import _speedups
except ImportError:
    _speedups = None


def _patch(impl):
    # every module resolves kernels through the backend module at call time
    backend.slab_residual = impl.slab_residual
    backend.slab_residual_arr = impl.slab_residual_arr
    backend.slab_scan_bracket = impl.slab_scan_bracket
    backend.slab_solve_bracket = impl.slab_solve_bracket
    backend.stack_rs_rp = impl.stack_rs_rp


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    repeats = int(sys.argv[1]) if len(sys.argv) > 1 else 5
    stack = WaveguideStack(2.2, 1.45, 1.0, 400e-9)
    ctx = OpticalContext(780e-9)
    emitter = DipoleEmitter.parallel(780e-9, 100e-9)

    cases = {
        "find_guided_modes (Ta2O5 census)":
            lambda: wgemit.find_guided_modes(stack, ctx),
        "total_rate (parallel dipole, Z=100nm)":
            lambda: wgemit.total_rate(stack, ctx, emitter),
        "branching_ratio (full report)":
            lambda: wgemit.branching_ratio(stack, ctx, emitter),
    }

    impls = [("python", _purepy)]
    if _speedups is not None:
        impls.append(("compiled", _speedups))
    else:
        print("compiled extension not built; showing python backend only")

    results = {}
    for name, impl in impls:
        _patch(impl)
        for label, fn in cases.items():
            fn()  # warm up
            results[(label, name)] = _time(fn, repeats)

    width = max(len(label) for label in cases)
    names = [n for n, _ in impls]
    header = f"{'case':<{width}}  " + "  ".join(f"{n:>12}" for n in names)
    if len(names) == 2:
        header += f"  {'speedup':>8}"
    print(header)
    for label in cases:
        row = f"{label:<{width}}  "
        row += "  ".join(f"{results[(label, n)] * 1e3:>9.3f} ms" for n in names)
        if len(names) == 2:
            row += f"  {results[(label, 'python')] / results[(label, 'compiled')]:>7.2f}x"
        print(row)


if __name__ == "__main__":
    main()
