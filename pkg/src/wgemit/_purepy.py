"""Pure numpy implementations of the hot numerical kernels.

These are the reference semantics; wgemit._speedups provides a compiled drop-in
replacement with identical results (parity is enforced by tests).  All lengths
here are dimensionless multiples of 1/k (dbar = k*d), so the kernels never see
a wavelength.
"""
import math

import numpy as np


def slab_residual(neff, n1, n2, n3, dbar, tm, order):
    """Phase-form dispersion residual F(n_eff) for one mode order.

    F = h*d - atan(w2*k2/h) - atan(w3*k3/h) - order*pi with h, k2, k3 the
    transverse/evanescent wavenumbers in units of k and wj = (n1/nj)^2 for TM,
    1 for TE.  F is strictly decreasing in n_eff on [max(n2,n3), n1]; its
    unique zero per order is the mode.  Closed-interval endpoints are valid
    (atan2 fixes the h=0 branch at pi/2; negative radicands from float dust
    are clamped to zero).
    """
    h = math.sqrt(max(n1 * n1 - neff * neff, 0.0))
    k2 = math.sqrt(max(neff * neff - n2 * n2, 0.0))
    k3 = math.sqrt(max(neff * neff - n3 * n3, 0.0))
    if tm:
        w2 = (n1 * n1) / (n2 * n2)
        w3 = (n1 * n1) / (n3 * n3)
    else:
        w2 = w3 = 1.0
    return h * dbar - math.atan2(w2 * k2, h) - math.atan2(w3 * k3, h) - order * math.pi


def slab_residual_arr(neff, n1, n2, n3, dbar, tm, order):
    """Vectorized slab_residual over an array of effective indices."""
    neff = np.asarray(neff, dtype=float)
    h = np.sqrt(np.maximum(n1 * n1 - neff * neff, 0.0))
    k2 = np.sqrt(np.maximum(neff * neff - n2 * n2, 0.0))
    k3 = np.sqrt(np.maximum(neff * neff - n3 * n3, 0.0))
    if tm:
        w2 = (n1 * n1) / (n2 * n2)
        w3 = (n1 * n1) / (n3 * n3)
    else:
        w2 = w3 = 1.0
    return h * dbar - np.arctan2(w2 * k2, h) - np.arctan2(w3 * k3, h) - order * math.pi


def slab_scan_bracket(a, b, npts, n1, n2, n3, dbar, tm, order):
    """Bracket the residual's sign change on a uniform npts grid over [a, b].

    Returns the first grid cell where F turns nonpositive (F is decreasing, so
    that cell holds the only root); falls back to (a, b) if the scan sees no
    sign change, which the caller's endpoint checks make a valid bracket.
    """
    step = (b - a) / (npts - 1)
    x = a + step * np.arange(npts)
    vals = slab_residual_arr(x, n1, n2, n3, dbar, tm, order)
    neg = np.nonzero(vals <= 0.0)[0]
    if len(neg) == 0 or neg[0] == 0:
        return a, b
    i = int(neg[0])
    return float(x[i - 1]), float(x[i])


def slab_solve_bracket(lo, hi, n1, n2, n3, dbar, tm, order):
    """Bisect the residual's sign change inside [lo, hi] to float exhaustion.

    Caller guarantees F(lo) > 0 >= F(hi) (F is decreasing).  Running the
    bracket down to adjacent floats costs ~50 evaluations and gives n_eff at
    machine precision, which the group-index finite difference relies on.
    """
    while hi - lo > 0.0:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if slab_residual(mid, n1, n2, n3, dbar, tm, order) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def stack_rs_rp(u, n1, n2, n3, dbar):
    """Airy reflection coefficients (r_s, r_p) of the two-interface stack.

    u is the in-plane index k_par/k (complex array allowed; the total-rate
    contour dips into Im u < 0 around guided-mode poles).  Vertical
    wavenumbers are principal square roots w_j = sqrt(nj^2 - u^2); adding
    complex zero first normalizes -0.0 imaginary parts so that real u beyond a
    light line lands on the decaying branch Im w_j >= 0.
    """
    u = np.asarray(u, dtype=complex)
    u2 = u * u
    w1 = np.sqrt((n1 * n1 - u2) + 0j)
    w2 = np.sqrt((n2 * n2 - u2) + 0j)
    w3 = np.sqrt((n3 * n3 - u2) + 0j)
    e1 = n1 * n1
    e2 = n2 * n2
    e3 = n3 * n3
    with np.errstate(invalid="ignore", divide="ignore"):
        rs31 = (w3 - w1) / (w3 + w1)
        rs12 = (w1 - w2) / (w1 + w2)
        rp31 = (e1 * w3 - e3 * w1) / (e1 * w3 + e3 * w1)
        rp12 = (e2 * w1 - e1 * w2) / (e2 * w1 + e1 * w2)
        ph = np.exp(2j * w1 * dbar)
        rs = (rs31 + rs12 * ph) / (1.0 + rs31 * rs12 * ph)
        rp = (rp31 + rp12 * ph) / (1.0 + rp31 * rp12 * ph)
    film_line = w1 == 0.0
    if np.any(film_line):
        # removable 0/0 of the Airy form at the film light line u = n1
        if n1 == n2 and n1 == n3:
            rs = np.where(film_line, 0.0 + 0.0j, rs)
            rp = np.where(film_line, 0.0 + 0.0j, rp)
        else:
            rs = rs.copy()
            rp = rp.copy()
            w2m, w3m = w2[film_line], w3[film_line]
            rs[film_line] = ((w3m - w2m - 1j * dbar * w2m * w3m)
                             / (w3m + w2m - 1j * dbar * w2m * w3m))
            rp[film_line] = ((e2 * w3m - e3 * w2m - 1j * dbar * e1 * w2m * w3m)
                             / (e2 * w3m + e3 * w2m - 1j * dbar * e1 * w2m * w3m))
    return rs, rp
