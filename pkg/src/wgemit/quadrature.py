"""Adaptive Gauss-Kronrod panel quadrature for complex-valued integrands.

The driver evaluates the integrand on batched node arrays (one call per
refinement round covering every new panel), so a vectorized integrand runs at
numpy speed regardless of how many panels the adaptive subdivision creates.
Results are summed with math.fsum in panel order, which makes the value
independent of evaluation order.
"""
import math

import numpy as np

from .errors import ConvergenceError

# 15-point Kronrod abscissae/weights on [-1, 1]; the embedded 7-point Gauss
# rule lives on the odd-index abscissae (QUADPACK constants).
_XGK = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759,
    0.991455371120813,
])
_WGK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529,
])
_WG = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469,
    0.381830050505119, 0.279705391489277, 0.129484966168870,
])

_LEGGAUSS_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _panel_estimates(f, panels):
    """GK15 value and error estimate for each (a, b) panel, one f call total."""
    a = np.array([p[0] for p in panels])
    b = np.array([p[1] for p in panels])
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = (mid[:, None] + half[:, None] * _XGK[None, :]).ravel()
    v = np.asarray(f(x), dtype=complex).reshape(len(panels), 15)
    i15 = (v * _WGK).sum(axis=1) * half
    i7 = (v[:, 1::2] * _WG).sum(axis=1) * half
    err = np.abs(i15 - i7)
    return list(i15), list(err)


def integrate_complex(f, segments, rel_tol=1e-8, abs_tol=1e-13, max_panels=16384):
    """Integrate vectorized complex-valued f over a list of real segments.

    Panels whose error exceeds an equidistributed share of the tolerance are
    bisected each round.  Raises ConvergenceError if max_panels is reached
    before the global error estimate drops below tolerance.
    """
    panels = [(float(a), float(b)) for a, b in segments if float(b) > float(a)]
    if not panels:
        return 0.0 + 0.0j
    vals, errs = _panel_estimates(f, panels)

    while True:
        order = sorted(range(len(panels)), key=lambda i: panels[i])
        total = complex(
            math.fsum(vals[i].real for i in order),
            math.fsum(vals[i].imag for i in order),
        )
        err_sum = math.fsum(errs[i] for i in order)
        tol = max(rel_tol * abs(total), abs_tol)
        if err_sum <= tol:
            return total
        if len(panels) >= max_panels:
            raise ConvergenceError(
                f"quadrature did not converge: {len(panels)} panels, "
                f"error {err_sum:.3e} > tol {tol:.3e}"
            )
        share = tol / len(panels)
        split = [i for i in range(len(panels)) if errs[i] > share]
        if not split:
            split = [max(range(len(panels)), key=lambda i: errs[i])]
        split_set = set(split)
        keep_panels = [panels[i] for i in range(len(panels)) if i not in split_set]
        keep_vals = [vals[i] for i in range(len(panels)) if i not in split_set]
        keep_errs = [errs[i] for i in range(len(panels)) if i not in split_set]
        new_panels = []
        for i in split:
            a, b = panels[i]
            m = 0.5 * (a + b)
            if m <= a or m >= b:  # interval at float resolution; keep as is
                keep_panels.append((a, b))
                keep_vals.append(vals[i])
                keep_errs.append(0.0)
                continue
            new_panels.extend([(a, m), (m, b)])
        if not new_panels:
            return total
        new_vals, new_errs = _panel_estimates(f, new_panels)
        panels = keep_panels + new_panels
        vals = keep_vals + new_vals
        errs = keep_errs + new_errs


def gauss_legendre_complex(f, a, b, n):
    """Fixed-order Gauss-Legendre rule for a vectorized complex integrand."""
    try:
        x, w = _LEGGAUSS_CACHE[n]
    except KeyError:
        x, w = np.polynomial.legendre.leggauss(n)
        _LEGGAUSS_CACHE[n] = (x, w)
    t = 0.5 * (a + b) + 0.5 * (b - a) * x
    v = np.asarray(f(t), dtype=complex)
    return 0.5 * (b - a) * complex(
        math.fsum((w * v.real).tolist()), math.fsum((w * v.imag).tolist())
    )
