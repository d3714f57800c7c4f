"""Emission-rate tests: reflection, selection rules, dual-route equivalence,
total-rate behavior and report invariants."""
import math
from dataclasses import replace

import numpy as np
import pytest

from wgemit import (DipoleEmitter, DomainError, OpticalContext, Polarization,
                    WaveguideStack, branching_ratio, find_guided_modes,
                    guided_rate, guided_rate_from_profile,
                    guided_rate_via_residue, normalization_constant,
                    reflection_coefficients, total_rate)
from conftest import LAMBDA, SENSOR, SYM255, TA2O5, dense_total_rate_oracle

TE, TM = Polarization.TE, Polarization.TM

# surface rates of the Ta2O5 example at Z=0, certified by the residue route
TA2O5_W0_PAR = {
    "TE0": 0.14279446067464902,
    "TE1": 0.4701626004016443,
    "TM0": 0.19086275852684037,
    "TM1": 0.3231537975900164,
}
TA2O5_WTOT_PAR_Z0 = 2.1988682597144438  # dense composite-GL oracle


# ---------------------------------------------------------------------------
# reflection coefficients
# ---------------------------------------------------------------------------

def test_reflection_degenerate_stack_is_zero(ctx):
    stack = WaveguideStack(1.0, 1.0, 1.0, 300e-9)
    for u in (0.0, 0.5, 0.999, 1.5, 3.0):
        r = reflection_coefficients(stack, ctx, u)
        assert r.r_s == 0 and r.r_p == 0


def test_reflection_thin_film_reduces_to_fresnel(ctx):
    # d -> 0 with n1 = n2: single 3|2 interface
    stack = WaveguideStack(1.45, 1.45, 1.0, 1e-15)
    r = reflection_coefficients(stack, ctx, 0.0)
    expected = (1.0 - 1.45) / (1.0 + 1.45)
    assert r.r_s.real == pytest.approx(expected, rel=1e-9)
    assert r.r_s.imag == pytest.approx(0.0, abs=1e-12)
    # p convention: r_p = -r_s at normal incidence
    assert r.r_p.real == pytest.approx(-expected, rel=1e-9)


def test_reflection_magnitude_bounded_in_radiative_region(ta2o5, ctx):
    for u in np.linspace(0.0, 0.999, 40):
        r = reflection_coefficients(ta2o5, ctx, float(u))
        assert abs(r.r_s) <= 1.0 + 1e-12
        assert abs(r.r_p) <= 1.0 + 1e-12


def test_reflection_real_in_guided_interval_off_poles(ta2o5, ctx):
    modes = find_guided_modes(ta2o5, ctx)
    poles = [m.n_eff for m in modes]
    rng = np.random.default_rng(3)
    count = 0
    while count < 30:
        u = rng.uniform(ta2o5.n_hi + 1e-3, ta2o5.n1 - 1e-3)
        if min(abs(u - p) for p in poles) < 1e-2:
            continue
        r = reflection_coefficients(ta2o5, ctx, float(u))
        assert abs(r.r_s.imag) < 1e-9 * max(1.0, abs(r.r_s))
        assert abs(r.r_p.imag) < 1e-9 * max(1.0, abs(r.r_p))
        count += 1


def test_reflection_poles_coincide_with_neff(ta2o5, ctx):
    # the central internal oracle: r poles sit at the solver's n_eff values
    for m in find_guided_modes(ta2o5, ctx):
        attr = "r_p" if m.pol is TM else "r_s"

        def inv_r(u):
            return (1.0 / getattr(reflection_coefficients(ta2o5, ctx, u), attr)).real

        lo, hi = m.n_eff - 5e-5, m.n_eff + 5e-5
        flo, fhi = inv_r(lo), inv_r(hi)
        assert flo * fhi < 0.0  # 1/r crosses zero at the pole
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if inv_r(mid) * flo > 0.0:
                lo = mid
            else:
                hi = mid
        assert 0.5 * (lo + hi) == pytest.approx(m.n_eff, abs=1e-9)


def test_reflection_accepts_complex_u(ta2o5, ctx):
    r = reflection_coefficients(ta2o5, ctx, 1.7 - 1e-4j)
    assert math.isfinite(r.r_s.real) and math.isfinite(r.r_p.real)


# ---------------------------------------------------------------------------
# guided rates (golden-rule route)
# ---------------------------------------------------------------------------

def test_selection_rule_te_exactly_zero(ta2o5, ctx):
    perp = DipoleEmitter.perpendicular(LAMBDA, 50e-9)
    for m in find_guided_modes(ta2o5, ctx):
        w = guided_rate(m, ta2o5, ctx, perp)
        if m.pol is TE:
            assert w == 0.0
        else:
            assert w > 0.0


def test_exponential_height_law_exact(ta2o5, ctx):
    for m in find_guided_modes(ta2o5, ctx):
        em0 = DipoleEmitter.parallel(LAMBDA, 0.0)
        w0 = guided_rate(m, ta2o5, ctx, em0)
        for z in (10e-9, 137e-9, 1.3e-6):
            em = DipoleEmitter.parallel(LAMBDA, z)
            w = guided_rate(m, ta2o5, ctx, em)
            assert w / w0 == pytest.approx(math.exp(-2 * m.kappa3 * z), rel=1e-12)


def test_exponential_law_logfit_slope(ta2o5, ctx):
    # log w is affine in Z with slope -2*kappa3 to 1e-10 relative
    zs = np.linspace(0.0, 2 * LAMBDA, 50)
    for m in find_guided_modes(ta2o5, ctx):
        ws = [guided_rate(m, ta2o5, ctx, DipoleEmitter.parallel(LAMBDA, z))
              for z in zs]
        slope = np.polyfit(zs, np.log(ws), 1)[0]
        assert slope == pytest.approx(-2.0 * m.kappa3, rel=1e-10)


def test_inplane_azimuth_invariance(ta2o5, ctx):
    m = find_guided_modes(ta2o5, ctx)[0]
    base = guided_rate(m, ta2o5, ctx, DipoleEmitter(LAMBDA, (1, 0, 0), 30e-9))
    for phi in (0.3, 1.1, 2.8, 4.9):
        em = DipoleEmitter(LAMBDA, (math.cos(phi), math.sin(phi), 0.0), 30e-9)
        assert guided_rate(m, ta2o5, ctx, em) == pytest.approx(base, rel=1e-15)


def test_orientation_mix_is_incoherent(ta2o5, ctx):
    tm0 = [m for m in find_guided_modes(ta2o5, ctx) if m.label == "TM0"][0]
    z = 20e-9
    w_perp = guided_rate(tm0, ta2o5, ctx, DipoleEmitter.perpendicular(LAMBDA, z))
    w_par = guided_rate(tm0, ta2o5, ctx, DipoleEmitter.parallel(LAMBDA, z))
    theta = 0.7
    em = DipoleEmitter(LAMBDA, (math.sin(theta), 0.0, math.cos(theta)), z)
    expected = math.cos(theta) ** 2 * w_perp + math.sin(theta) ** 2 * w_par
    assert guided_rate(tm0, ta2o5, ctx, em) == pytest.approx(expected, rel=1e-12)


def test_rate_doubles_a_quadruples_rate(ta2o5, ctx):
    m = find_guided_modes(ta2o5, ctx)[0]
    em = DipoleEmitter.parallel(LAMBDA, 10e-9)
    prof = normalization_constant(m, ta2o5, ctx)
    w1 = guided_rate_from_profile(prof, ta2o5, ctx, em)
    w4 = guided_rate_from_profile(replace(prof, A=2 * prof.A), ta2o5, ctx, em)
    assert w4 == pytest.approx(4.0 * w1, rel=1e-15)


def test_surface_rates_against_frozen_values(ta2o5, ctx):
    em = DipoleEmitter.parallel(LAMBDA, 0.0)
    for m in find_guided_modes(ta2o5, ctx):
        assert guided_rate(m, ta2o5, ctx, em) == pytest.approx(
            TA2O5_W0_PAR[m.label], rel=1e-9)


def test_wavelength_mismatch_rejected(ta2o5, ctx):
    m = find_guided_modes(ta2o5, ctx)[0]
    with pytest.raises(DomainError):
        guided_rate(m, ta2o5, ctx, DipoleEmitter.parallel(790e-9, 0.0))


# ---------------------------------------------------------------------------
# dual-route equivalence (golden rule vs classical pole residue)
# ---------------------------------------------------------------------------

def _equiv_cases():
    cases = []
    for stack in (TA2O5, SYM255):
        for zf in (0.0, 0.2, 0.5, 1.0):
            cases.append((stack, zf))
    return cases


@pytest.mark.parametrize("stack,zf", _equiv_cases())
def test_guided_rate_matches_residue(stack, zf, ctx):
    z = zf * LAMBDA
    for m in find_guided_modes(stack, ctx):
        emitters = [DipoleEmitter.parallel(LAMBDA, z)]
        if m.pol is TM:
            emitters.append(DipoleEmitter.perpendicular(LAMBDA, z))
        for em in emitters:
            w_golden = guided_rate(m, stack, ctx, em)
            w_residue = guided_rate_via_residue(stack, ctx, em, m)
            assert w_residue == pytest.approx(w_golden, rel=1e-3)


def test_residue_route_sensor_stack(ctx):
    # emitter immersed in a higher-index fluid (n3 > n2)
    for m in find_guided_modes(SENSOR, ctx):
        for em in (DipoleEmitter.parallel(LAMBDA, 0.0),
                   DipoleEmitter.perpendicular(LAMBDA, 0.5 * LAMBDA)):
            w_golden = guided_rate(m, SENSOR, ctx, em)
            w_residue = guided_rate_via_residue(SENSOR, ctx, em, m)
            if w_golden == 0.0:
                assert abs(w_residue) < 1e-10
            else:
                assert w_residue == pytest.approx(w_golden, rel=1e-3)


def test_te_pole_residue_zero_for_perpendicular(ta2o5, ctx):
    te0 = find_guided_modes(ta2o5, ctx)[0]
    em = DipoleEmitter.perpendicular(LAMBDA, 10e-9)
    assert abs(guided_rate_via_residue(ta2o5, ctx, em, te0)) < 1e-10


def test_residue_vanishes_toward_cutoff(ctx):
    from wgemit import cutoff_thickness
    dc = cutoff_thickness(2.0, 1.0, 1.0, ctx, TM, 1)
    em = DipoleEmitter.perpendicular(LAMBDA, 0.0)
    prev = None
    for rel_excess in (3e-2, 1e-2, 3e-3, 3e-4):
        stack = WaveguideStack(2.0, 1.0, 1.0, dc * (1 + rel_excess))
        tm1 = [m for m in find_guided_modes(stack, ctx) if m.label == "TM1"][0]
        w = guided_rate_via_residue(stack, ctx, em, tm1)
        assert w >= 0.0
        if prev is not None:
            assert w < prev
        prev = w
    assert prev < 2e-3  # evanescent amplitude dies linearly in (d - dc)


def test_residue_at_exact_birth_is_zero(ctx):
    from wgemit import cutoff_thickness
    dc = cutoff_thickness(2.0, 1.0, 1.0, ctx, TM, 1)
    stack = WaveguideStack(2.0, 1.0, 1.0, dc)
    tm1 = [m for m in find_guided_modes(stack, ctx) if m.label == "TM1"][0]
    em = DipoleEmitter.perpendicular(LAMBDA, 0.0)
    assert guided_rate_via_residue(stack, ctx, em, tm1) == 0.0
    assert guided_rate(tm1, stack, ctx, em) == 0.0


# ---------------------------------------------------------------------------
# total rate
# ---------------------------------------------------------------------------

def test_total_rate_degenerate_stack_is_unity(ctx):
    stack = WaveguideStack(1.0, 1.0, 1.0, 250e-9)
    for z in np.linspace(0.0, 3 * LAMBDA, 20):
        for em in (DipoleEmitter.parallel(LAMBDA, float(z)),
                   DipoleEmitter.perpendicular(LAMBDA, float(z))):
            assert total_rate(stack, ctx, em) == pytest.approx(1.0, abs=1e-6)


def test_total_rate_far_field_asymptote(ctx):
    for stack in (TA2O5, SYM255):
        for em in (DipoleEmitter.parallel(LAMBDA, 10 * LAMBDA),
                   DipoleEmitter.perpendicular(LAMBDA, 10 * LAMBDA)):
            assert total_rate(stack, ctx, em) == pytest.approx(1.0, rel=0.02)


def test_total_rate_surface_enhancement_vs_dense_oracle(ta2o5, ctx):
    em = DipoleEmitter.parallel(LAMBDA, 0.0)
    w = total_rate(ta2o5, ctx, em)
    assert w > 1.0  # enhanced total spontaneous emission at the surface
    poles = [m.n_eff for m in find_guided_modes(ta2o5, ctx)]
    oracle = dense_total_rate_oracle(ta2o5, ctx, em, poles)
    assert w == pytest.approx(oracle, rel=1e-6)
    assert w == pytest.approx(TA2O5_WTOT_PAR_Z0, rel=1e-6)


def test_total_rate_dense_oracle_more_cases(ctx):
    for stack, em in (
        (SYM255, DipoleEmitter.perpendicular(LAMBDA, 0.0)),
        (SYM255, DipoleEmitter.parallel(LAMBDA, 0.3 * LAMBDA)),
        (TA2O5, DipoleEmitter.perpendicular(LAMBDA, 0.1 * LAMBDA)),
        (SENSOR, DipoleEmitter.parallel(LAMBDA, 0.0)),
    ):
        poles = [m.n_eff for m in find_guided_modes(stack, ctx)]
        oracle = dense_total_rate_oracle(stack, ctx, em, poles)
        assert total_rate(stack, ctx, em) == pytest.approx(oracle, rel=1e-6)


def test_total_rate_monotone_tail_bound(ctx):
    # |w_tot/w0 - 1| < 5/(kZ) past one wavelength
    k = 2 * math.pi / LAMBDA
    for stack in (TA2O5, SYM255):
        for zf in (1.0, 2.0, 4.0, 8.0):
            z = zf * LAMBDA
            w = total_rate(stack, ctx, DipoleEmitter.parallel(LAMBDA, z))
            assert abs(w - 1.0) < 5.0 / (k * z)


def test_total_rate_negative_height_rejected(ta2o5, ctx):
    with pytest.raises(DomainError):
        DipoleEmitter.parallel(LAMBDA, -1e-9)


def test_total_exceeds_guided_sum(ta2o5, ctx):
    em = DipoleEmitter.parallel(LAMBDA, 0.0)
    modes = find_guided_modes(ta2o5, ctx)
    guided = sum(guided_rate(m, ta2o5, ctx, em) for m in modes)
    assert total_rate(ta2o5, ctx, em) > guided


# ---------------------------------------------------------------------------
# branching report
# ---------------------------------------------------------------------------

def test_report_invariants(ta2o5, ctx):
    em = DipoleEmitter.parallel(LAMBDA, 25e-9)
    rep = branching_ratio(ta2o5, ctx, em)
    assert [lbl for lbl, _ in rep.per_mode] == ["TE0", "TE1", "TM0", "TM1"]
    for (lbl, w), (lbl2, p) in zip(rep.per_mode, rep.branching):
        assert lbl == lbl2
        assert w >= 0.0
        assert p == w / rep.total  # Eq-exact ratio
    assert 0.0 < rep.guided_sum < 1.0
    assert rep.total >= sum(w for _, w in rep.per_mode)
    assert rep.guided_sum == pytest.approx(
        math.fsum(p for _, p in rep.branching), abs=0)


def test_branching_far_field_suppression(ta2o5, ctx):
    rep = branching_ratio(ta2o5, ctx, DipoleEmitter.parallel(LAMBDA, 10 * LAMBDA))
    for _, p in rep.branching:
        assert p < 1e-3


def test_branching_scale_invariance(ta2o5, ctx):
    em = DipoleEmitter.parallel(LAMBDA, 60e-9)
    base = branching_ratio(ta2o5, ctx, em)
    for s in (0.5, 2.0, 3.7):
        scaled = branching_ratio(
            replace(ta2o5, d=ta2o5.d * s),
            OpticalContext(LAMBDA * s),
            DipoleEmitter.parallel(LAMBDA * s, 60e-9 * s))
        for (l0, p0), (l1, p1) in zip(base.branching, scaled.branching):
            assert l0 == l1
            assert p1 == pytest.approx(p0, rel=1e-10)
