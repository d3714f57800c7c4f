# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: drop-in replacements for wgemit._purepy.

Same formulas, same branch conventions; parity with the numpy fallback is
enforced by tests to 1e-13.
"""
from libc.math cimport atan2, sqrt, M_PI

import numpy as np

cdef extern from "complex.h" nogil:
    double complex csqrt(double complex)
    double complex cexp(double complex)
    double creal(double complex)
    double cimag(double complex)


cpdef double slab_residual(double neff, double n1, double n2, double n3,
                           double dbar, bint tm, int order):
    """Phase-form dispersion residual; see wgemit._purepy.slab_residual."""
    cdef double h2 = n1 * n1 - neff * neff
    cdef double q2 = neff * neff - n2 * n2
    cdef double q3 = neff * neff - n3 * n3
    cdef double h = sqrt(h2) if h2 > 0.0 else 0.0
    cdef double k2 = sqrt(q2) if q2 > 0.0 else 0.0
    cdef double k3 = sqrt(q3) if q3 > 0.0 else 0.0
    cdef double w2 = 1.0
    cdef double w3 = 1.0
    if tm:
        w2 = (n1 * n1) / (n2 * n2)
        w3 = (n1 * n1) / (n3 * n3)
    return h * dbar - atan2(w2 * k2, h) - atan2(w3 * k3, h) - order * M_PI


def slab_residual_arr(neff, double n1, double n2, double n3, double dbar,
                      bint tm, int order):
    """Vectorized slab_residual over an array of effective indices."""
    cdef double[::1] x = np.ascontiguousarray(neff, dtype=np.float64)
    out_arr = np.empty(x.shape[0], dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    for i in range(x.shape[0]):
        out[i] = slab_residual(x[i], n1, n2, n3, dbar, tm, order)
    return out_arr


def slab_scan_bracket(double a, double b, int npts, double n1, double n2,
                      double n3, double dbar, bint tm, int order):
    """Bracket the residual's sign change on a uniform grid (early exit in C)."""
    cdef double step = (b - a) / (npts - 1)
    cdef double xprev = a
    cdef double x
    cdef Py_ssize_t i
    if slab_residual(a, n1, n2, n3, dbar, tm, order) <= 0.0:
        return a, b
    for i in range(1, npts):
        x = a + step * i
        if slab_residual(x, n1, n2, n3, dbar, tm, order) <= 0.0:
            return xprev, x
        xprev = x
    return a, b


cpdef double slab_solve_bracket(double lo, double hi, double n1, double n2,
                                double n3, double dbar, bint tm, int order):
    """Bisect the residual's sign change in [lo, hi] to float exhaustion."""
    cdef double mid
    while hi - lo > 0.0:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if slab_residual(mid, n1, n2, n3, dbar, tm, order) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


cdef inline double complex _wz(double complex u2, double n) noexcept nogil:
    # principal sqrt of n^2 - u^2; adding +0.0 to the imaginary part
    # normalizes -0.0 so real u beyond the light line lands on the decaying
    # branch Im >= 0
    cdef double complex w = n * n - u2
    cdef double wi = cimag(w) + 0.0
    return csqrt(creal(w) + 1j * wi)


def stack_rs_rp(u, double n1, double n2, double n3, double dbar):
    """Airy reflection coefficients; see wgemit._purepy.stack_rs_rp."""
    cdef double complex[::1] uu = np.ascontiguousarray(u, dtype=np.complex128)
    rs_arr = np.empty(uu.shape[0], dtype=np.complex128)
    rp_arr = np.empty(uu.shape[0], dtype=np.complex128)
    cdef double complex[::1] rs = rs_arr
    cdef double complex[::1] rp = rp_arr
    cdef double e1 = n1 * n1, e2 = n2 * n2, e3 = n3 * n3
    cdef double complex u2, w1, w2, w3, rs31, rs12, rp31, rp12, ph, den
    cdef Py_ssize_t i
    for i in range(uu.shape[0]):
        u2 = uu[i] * uu[i]
        w1 = _wz(u2, n1)
        w2 = _wz(u2, n2)
        w3 = _wz(u2, n3)
        if w1 == 0.0:
            # removable 0/0 of the Airy form at the film light line u = n1
            if n1 == n2 and n1 == n3:
                rs[i] = 0.0
                rp[i] = 0.0
            else:
                rs[i] = ((w3 - w2 - 1j * dbar * w2 * w3)
                         / (w3 + w2 - 1j * dbar * w2 * w3))
                rp[i] = ((e2 * w3 - e3 * w2 - 1j * dbar * e1 * w2 * w3)
                         / (e2 * w3 + e3 * w2 - 1j * dbar * e1 * w2 * w3))
            continue
        rs31 = (w3 - w1) / (w3 + w1)
        rs12 = (w1 - w2) / (w1 + w2)
        rp31 = (e1 * w3 - e3 * w1) / (e1 * w3 + e3 * w1)
        rp12 = (e2 * w1 - e1 * w2) / (e2 * w1 + e1 * w2)
        ph = cexp(2j * w1 * dbar)
        rs[i] = (rs31 + rs12 * ph) / (1.0 + rs31 * rs12 * ph)
        rp[i] = (rp31 + rp12 * ph) / (1.0 + rp31 * rp12 * ph)
    return rs_arr, rp_arr
