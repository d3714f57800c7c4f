"""Parity between the compiled kernels and the numpy fallback."""
import math

import numpy as np
import pytest

from wgemit import _purepy

speedups = pytest.importorskip(
    "wgemit._speedups", reason="compiled extension not built")

CASES = [
    # n1, n2, n3, dbar
    (2.2, 1.45, 1.0, 3.2221),
    (2.0, 1.0, 1.0, 2.054),
    (2.2, 1.33, 1.45, 3.2221),
    (1.5, 1.0, 1.0, 0.4),
]


@pytest.mark.parametrize("n1,n2,n3,dbar", CASES)
def test_residual_parity(n1, n2, n3, dbar):
    nhi = max(n2, n3)
    grid = np.linspace(nhi, n1, 513)
    for tm in (False, True):
        for order in (0, 1, 3):
            a = _purepy.slab_residual_arr(grid, n1, n2, n3, dbar, tm, order)
            b = speedups.slab_residual_arr(grid, n1, n2, n3, dbar, tm, order)
            np.testing.assert_allclose(a, b, rtol=0, atol=1e-14)
            for x in (nhi, 0.5 * (nhi + n1), n1):
                sa = _purepy.slab_residual(x, n1, n2, n3, dbar, tm, order)
                sb = speedups.slab_residual(x, n1, n2, n3, dbar, tm, order)
                assert sa == sb


@pytest.mark.parametrize("n1,n2,n3,dbar", CASES)
def test_scan_and_solve_parity(n1, n2, n3, dbar):
    nhi = max(n2, n3)
    a, b = nhi + 1e-9, n1 - 1e-9
    for tm in (False, True):
        f0 = _purepy.slab_residual(nhi, n1, n2, n3, dbar, tm, 0)
        if f0 < 0:
            continue
        br_py = _purepy.slab_scan_bracket(a, b, 2048, n1, n2, n3, dbar, tm, 0)
        br_cy = speedups.slab_scan_bracket(a, b, 2048, n1, n2, n3, dbar, tm, 0)
        assert br_py == pytest.approx(br_cy, rel=0, abs=0)
        root_py = _purepy.slab_solve_bracket(*br_py, n1, n2, n3, dbar, tm, 0)
        root_cy = speedups.slab_solve_bracket(*br_cy, n1, n2, n3, dbar, tm, 0)
        assert root_py == root_cy


@pytest.mark.parametrize("n1,n2,n3,dbar", CASES)
def test_reflection_parity_real_and_complex(n1, n2, n3, dbar):
    nhi = max(n2, n3)
    u_real = np.linspace(0.0, n1 + 3.0, 801).astype(complex)
    theta = np.linspace(math.pi, 2 * math.pi, 64)
    u_arc = (0.5 * (nhi + n1)) + 1e-4 * np.exp(1j * theta)
    for u in (u_real, u_arc):
        rs_py, rp_py = _purepy.stack_rs_rp(u, n1, n2, n3, dbar)
        rs_cy, rp_cy = speedups.stack_rs_rp(u, n1, n2, n3, dbar)
        np.testing.assert_allclose(rs_py, rs_cy, rtol=1e-12, atol=1e-14)
        np.testing.assert_allclose(rp_py, rp_cy, rtol=1e-12, atol=1e-14)


def test_reflection_branch_beyond_light_line():
    # real u past every light line: r must be real (decaying branch on both
    # implementations, no sign flip from -0.0 imaginary parts)
    for impl in (_purepy, speedups):
        rs, rp = impl.stack_rs_rp(np.array([2.5 + 0j]), 2.2, 1.45, 1.0, 3.2)
        assert abs(rs[0].imag) < 1e-15
        assert abs(rp[0].imag) < 1e-15
        rs, rp = impl.stack_rs_rp(np.array([complex(2.5, -0.0)]),
                                  2.2, 1.45, 1.0, 3.2)
        assert abs(rs[0].imag) < 1e-15


def test_backend_selection_reports():
    from wgemit import BACKEND_NAME
    assert BACKEND_NAME in ("compiled", "python")
