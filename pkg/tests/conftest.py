"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the library's own algorithms: modes are
located with the tangent form of the dispersion relation via scipy's brentq
on a dense scan, and the total-rate reference uses fixed-order composite
Gauss-Legendre panels instead of adaptive Gauss-Kronrod.
"""
import math

import numpy as np
import pytest
from scipy.optimize import brentq

from wgemit import OpticalContext, Polarization, WaveguideStack
from wgemit.backend import stack_rs_rp

LAMBDA = 780e-9

TA2O5 = WaveguideStack(n1=2.2, n2=1.45, n3=1.0, d=400e-9)
SYM255 = WaveguideStack(n1=2.0, n2=1.0, n3=1.0, d=255e-9)
SENSOR = WaveguideStack(n1=2.2, n2=1.33, n3=1.45, d=400e-9)  # fluid-side emitter


@pytest.fixture(scope="session")
def ctx():
    return OpticalContext(LAMBDA)


@pytest.fixture(scope="session")
def ta2o5():
    return TA2O5


@pytest.fixture(scope="session")
def sym255():
    return SYM255


def tangent_oracle_neffs(stack, ctx, pol, npts=20000):
    """Mode effective indices by the tangent-form dispersion relation.

    G = sin(hd)*(h^2 - w2*w3*k2*k3) - cos(hd)*h*(w2*k2 + w3*k3) vanishes
    exactly at the guided modes (all orders at once) and is pole-free, so a
    dense scan plus brentq finds every root; roots are returned sorted by
    descending n_eff (ascending order).
    """
    n1, n2, n3 = stack.n1, stack.n2, stack.n3
    dbar = ctx.k * stack.d
    tm = pol is Polarization.TM
    w2 = (n1 / n2) ** 2 if tm else 1.0
    w3 = (n1 / n3) ** 2 if tm else 1.0

    def g(neff):
        h = math.sqrt(max(n1 * n1 - neff * neff, 0.0))
        k2 = math.sqrt(max(neff * neff - n2 * n2, 0.0))
        k3 = math.sqrt(max(neff * neff - n3 * n3, 0.0))
        hd = h * dbar
        return (math.sin(hd) * (h * h - w2 * w3 * k2 * k3)
                - math.cos(hd) * h * (w2 * k2 + w3 * k3))

    lo = max(n2, n3) + 1e-12
    hi = n1 - 1e-12
    grid = np.linspace(lo, hi, npts)
    vals = np.array([g(x) for x in grid])
    roots = []
    for i in range(npts - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            roots.append(grid[i])
        elif a * b < 0.0:
            roots.append(brentq(g, grid[i], grid[i + 1], xtol=1e-15))
    return sorted(roots, reverse=True)


def dense_total_rate_oracle(stack, ctx, emitter, poles, nseg_scale=1):
    """Total rate by fixed-order composite Gauss-Legendre over the contour.

    Independent of the adaptive integrator: every real-axis piece is covered
    by uniform 48-point panels (400 * nseg_scale on the radiative side,
    densified geometrically near each pole indentation on the evanescent
    side) and the semicircles use a 256-point rule.
    """
    n1, n2, n3 = stack.n1, stack.n2, stack.n3
    n3sq = n3 * n3
    dbar = ctx.k * stack.d
    zbar = ctx.k * emitter.Z
    oz = emitter.orientation[2]
    cperp, cpar = oz * oz, 1.0 - oz * oz

    def f_rad(v):
        u = np.sqrt(np.maximum(n3sq - v * v, 0.0)).astype(complex)
        rs, rp = stack_rs_rp(u, n1, n2, n3, dbar)
        out = (cperp * 1.5 * (u * u / n3sq) * rp
               + cpar * 0.75 * (rs - (v * v / n3sq) * rp))
        return (out * np.exp(2j * v * zbar)).real

    def f_evan(g):
        u = np.sqrt(n3sq + g * g).astype(complex)
        rs, rp = stack_rs_rp(u, n1, n2, n3, dbar)
        out = (cperp * 1.5 * (u * u / n3sq) * rp
               + cpar * 0.75 * (rs + (g * g / n3sq) * rp))
        return (-1j * out * np.exp(-2.0 * g * zbar)).real

    xg, wg = np.polynomial.legendre.leggauss(48)

    def gl(f, a, b, nseg):
        tot = 0.0
        edges = np.linspace(a, b, nseg + 1)
        for aa, bb in zip(edges[:-1], edges[1:]):
            t = 0.5 * (aa + bb) + 0.5 * (bb - aa) * xg
            tot += 0.5 * (bb - aa) * float(np.sum(wg * f(t)))
        return tot

    rho = 1e-4
    total = gl(f_rad, 0.0, n3, 400 * nseg_scale)

    def g_of(u):
        return math.sqrt(max(u * u - n3sq, 0.0))

    u_max = n1 + 40.0 / max(zbar, 2.0 * math.pi / 100.0)
    breaks = {0.0, g_of(n1), g_of(u_max)}
    if n2 > n3:
        breaks.add(g_of(n2))
    for p in poles:
        for j in range(9):
            for side in (-1.0, 1.0):
                uu = p + side * rho * 4.0 ** j
                if n3 < uu < u_max:
                    breaks.add(g_of(uu))
    gaps = [(g_of(p - rho), g_of(p + rho)) for p in poles]
    gb = sorted(breaks)
    for a, b in zip(gb[:-1], gb[1:]):
        mid = 0.5 * (a + b)
        if any(lo <= mid <= hi for lo, hi in gaps):
            continue
        total += gl(f_evan, a, b, 40 * nseg_scale)

    def f_complex(u):
        u = np.asarray(u, dtype=complex)
        rs, rp = stack_rs_rp(u, n1, n2, n3, dbar)
        v3 = np.sqrt((n3sq - u * u) + 0j)
        out = (cperp * 1.5 * (u ** 3 / (n3sq * v3)) * rp
               + cpar * 0.75 * (u / v3) * (rs - (v3 * v3 / n3sq) * rp))
        return out * np.exp(2j * v3 * zbar)

    xa, wa = np.polynomial.legendre.leggauss(256)
    th = math.pi + (xa + 1.0) * (math.pi / 2.0)
    wt = wa * (math.pi / 2.0)
    for p in poles:
        uu = p + rho * np.exp(1j * th)
        du = 1j * rho * np.exp(1j * th)
        total += float(np.sum((f_complex(uu) * du).real * wt))
    return n3 + total
