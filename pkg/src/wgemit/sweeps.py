"""Scripted experiments: figure-style sweeps, scaling check, thickness design.

Height sweeps reproduce the branching-ratio-vs-distance curves (Ta2O5/silica
film with a parallel dipole; symmetric silicon-nitride film with a
perpendicular dipole).  Thickness sweeps track the birth of a mode: the
column for a not-yet-confined mode is zero, and just above its cutoff the
surface amplitude grows while the evanescent reach shrinks.  Grid points are
independent; WGEMIT_THREADS > 1 evaluates them concurrently with output order
fixed by grid index.
"""
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import numpy as np

from .errors import DomainError, NoModesError
from .fields import normalization_constant
from .modes import cutoff_thickness, find_guided_modes
from .rates import branching_ratio, guided_rate_from_profile, total_rate
from .types import (DipoleEmitter, OpticalContext, Polarization, SweepSpec,
                    SweepTable, WaveguideStack)

_FIG2_STACK = WaveguideStack(n1=2.2, n2=1.45, n3=1.0, d=400e-9)
_FIG3_THICKNESSES = (235e-9, 245e-9, 255e-9)
_DEFAULT_HEIGHT_GRID = (1e-9, 2e-6, 200)  # log-spaced


def fig2_spec() -> SweepSpec:
    """Height sweep of the Ta2O5-on-silica example (780 nm, parallel dipole)."""
    return SweepSpec(scenario="fig2_ta2o5", stack=_FIG2_STACK, lambda0=780e-9,
                     orientation=(1.0, 0.0, 0.0), axis="height",
                     grid=_DEFAULT_HEIGHT_GRID)


def fig3_spec(d: float = 255e-9) -> SweepSpec:
    """Height sweep of the symmetric free-standing film (perpendicular dipole)."""
    return SweepSpec(scenario="fig3_symmetric",
                     stack=WaveguideStack(n1=2.0, n2=1.0, n3=1.0, d=d),
                     lambda0=780e-9, orientation=(0.0, 0.0, 1.0), axis="height",
                     grid=_DEFAULT_HEIGHT_GRID)


def _grid_values(spec: SweepSpec) -> np.ndarray:
    start, stop, n = spec.grid
    spacing = spec.spacing
    if spacing == "auto":
        spacing = "log" if spec.axis == "height" else "linear"
    if spacing == "log":
        if start <= 0:
            raise DomainError("log-spaced grids need start > 0")
        return np.geomspace(start, stop, int(n))
    return np.linspace(start, stop, int(n))


def _thread_count() -> int:
    raw = os.environ.get("WGEMIT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map_ordered(fn, items):
    workers = _thread_count()
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def sweep_height(spec: SweepSpec) -> SweepTable:
    """Branching ratios vs emitter height on the spec's grid.

    Guided rates share one mode solve (their height dependence is a pure
    exponential); the total rate is integrated per point.
    """
    if spec.axis != "height":
        raise DomainError(f"sweep_height needs axis='height', got {spec.axis!r}")
    ctx = OpticalContext(spec.lambda0)
    stack = spec.stack
    modes = find_guided_modes(stack, ctx)
    profiles = [normalization_constant(m, stack, ctx) for m in modes]
    heights = _grid_values(spec)

    def row(z):
        emitter = DipoleEmitter(spec.lambda0, spec.orientation, float(z))
        rates = [guided_rate_from_profile(p, stack, ctx, emitter)
                 for p in profiles]
        wtot = total_rate(stack, ctx, emitter)
        ratios = [w / wtot for w in rates]
        return (float(z) * 1e9, *ratios, math.fsum(ratios), wtot)

    rows = _map_ordered(row, list(heights))
    cols = ["abscissa_nm"]
    if spec.per_mode:
        cols += [f"P_{m.label}" for m in modes]
    else:
        rows = [(r[0], *r[1 + len(modes):]) for r in rows]
    cols += ["guided_sum", "wtot_over_w0"]
    return SweepTable(columns=tuple(cols), rows=tuple(tuple(r) for r in rows))


def sweep_thickness(spec: SweepSpec) -> SweepTable:
    """Branching ratios vs film thickness at emitter height spec.Z.

    Modes are re-solved at every thickness; columns cover the union of modes
    (taken at the largest thickness, where the count is maximal) and a mode
    that is not yet confined reports zero.  The trailing column holds the
    TM1 evanescent reach 1/(2*kappa3) in nm (zero while TM1 is unborn), which
    together with P_TM1 captures the mode-birth phenomenology.
    """
    if spec.axis != "thickness":
        raise DomainError(f"sweep_thickness needs axis='thickness', got {spec.axis!r}")
    ctx = OpticalContext(spec.lambda0)
    thicknesses = _grid_values(spec)
    labels = [m.label for m in find_guided_modes(
        replace(spec.stack, d=float(thicknesses[-1])), ctx)]

    def row(d):
        stack = replace(spec.stack, d=float(d))
        emitter = DipoleEmitter(spec.lambda0, spec.orientation, spec.Z)
        modes = find_guided_modes(stack, ctx)
        rates = {m.label: guided_rate_from_profile(
            normalization_constant(m, stack, ctx), stack, ctx, emitter)
            for m in modes}
        wtot = total_rate(stack, ctx, emitter)
        ratios = [rates.get(lbl, 0.0) / wtot for lbl in labels]
        tm1 = next((m for m in modes if m.pol is Polarization.TM and m.order == 1),
                   None)
        reach_nm = 0.0 if tm1 is None or tm1.kappa3 == 0.0 \
            else 1e9 / (2.0 * tm1.kappa3)
        return (float(d) * 1e9, *ratios, math.fsum(ratios), wtot, reach_nm)

    rows = _map_ordered(row, list(thicknesses))
    cols = ["abscissa_nm"]
    if spec.per_mode:
        cols += [f"P_{lbl}" for lbl in labels]
    else:
        rows = [(r[0], *r[1 + len(labels):]) for r in rows]
    cols += ["guided_sum", "wtot_over_w0", "decay_len_TM1_nm"]
    return SweepTable(columns=tuple(cols), rows=tuple(tuple(r) for r in rows))


def scaling_check(stack: WaveguideStack, ctx: OpticalContext,
                  emitter: DipoleEmitter, s: float) -> float:
    """Max relative deviation of any branching ratio under uniform length scaling.

    Scales (lambda, d, Z) by s and compares all P_mode and the total-rate
    ratio; the result is zero up to floating-point rounding because the
    numerics are dimensionless in k*length.
    """
    if s <= 0:
        raise DomainError(f"scale factor must be positive, got {s}")
    base = branching_ratio(stack, ctx, emitter)
    sc = branching_ratio(
        replace(stack, d=stack.d * s),
        OpticalContext(ctx.lambda0 * s),
        DipoleEmitter(emitter.lambda0 * s, emitter.orientation, emitter.Z * s),
    )
    if [l for l, _ in base.branching] != [l for l, _ in sc.branching]:
        raise DomainError("mode sets differ between scales")
    dev = 0.0
    for (_, p0), (_, p1) in zip(base.branching, sc.branching):
        ref = max(abs(p0), abs(p1))
        if ref > 0:
            dev = max(dev, abs(p0 - p1) / ref)
    return dev


def _golden_max(f, lo, hi, tol):
    """Golden-section maximum of f on [lo, hi]; returns (x, f(x))."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def optimize_thickness(stack: WaveguideStack, ctx: OpticalContext,
                       emitter: DipoleEmitter,
                       d_range: tuple[float, float],
                       tol: float = 1e-11) -> tuple[float, float]:
    """Film thickness maximizing the guided fraction at the emitter height.

    The objective guided_sum(d) is piecewise smooth with kinks at every
    mode-birth thickness, so the golden-section search restarts on each
    subinterval between consecutive cutoffs inside d_range.  tol defaults to
    0.01 nm.  Raises NoModesError when no thickness in the range confines any
    mode.
    """
    d_lo, d_hi = d_range
    if not (0 < d_lo < d_hi):
        raise DomainError(f"invalid thickness range {d_range}")

    cut_points = {d_lo, d_hi}
    for pol in (Polarization.TE, Polarization.TM):
        order = 0
        while True:
            dc = cutoff_thickness(stack.n1, stack.n2, stack.n3, ctx, pol, order)
            if dc > d_hi:
                break
            if d_lo < dc < d_hi:
                cut_points.add(dc)
            order += 1
    edges = sorted(cut_points)

    def objective(d):
        return branching_ratio(replace(stack, d=float(d)), ctx, emitter).guided_sum

    best_d, best_val = None, -1.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        # pad away from interior cutoff edges so no vanished mode is touched;
        # the requested range endpoints themselves are fair game
        pad = min(tol, 0.25 * (hi - lo))
        a = lo if lo == d_lo else lo + pad
        b = hi if hi == d_hi else hi - pad
        candidates = [_golden_max(objective, a, b, tol)]
        candidates.append((a, objective(a)))
        candidates.append((b, objective(b)))
        for x, v in candidates:
            if v > best_val:
                best_d, best_val = x, v
    if best_val <= 0.0:
        raise NoModesError(
            f"no confined mode anywhere in d range ({d_lo}, {d_hi})"
        )
    return best_d, best_val
