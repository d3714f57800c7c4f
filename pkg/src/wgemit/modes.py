"""Guided-mode solver for lossless three-layer slab waveguides.

Mode orders are 0-based and equal the number of field nodes inside the film;
the literature's "TE1"/"TM1" labels correspond to order 1 here.  The solver
works on the phase (eigenvalue-counting) form of the dispersion relation,
which is strictly monotone in n_eff for each order, so every root is simple,
bracketing cannot miss near-cutoff modes, and the endpoint values of the phase
function count the modes exactly.
"""
import math


from . import backend
from .errors import ConvergenceError, CutoffError, DomainError
from .types import GuidedMode, OpticalContext, Polarization, WaveguideStack

_PRESCAN_POINTS = 2048     # uniform pre-scan per order before bisection
_ENDPOINT_GUARD = 1e-9     # absolute guard away from the interval endpoints
_BRACKET_WIDTH = 1e-12     # certified bracket width in n_eff
_MARGINAL_KD = 1e-9        # kappa_birth * d below this flags a marginal mode
_FD_DELTA = 1e-6           # relative wavenumber step for the group index


def dispersion_residual(stack: WaveguideStack, ctx: OpticalContext,
                        pol: Polarization, n_eff: float, order: int = 0) -> float:
    """Phase-form dispersion residual; zero exactly at mode (pol, order).

    Strictly decreasing in n_eff.  n_eff may sit on the closed interval
    [max(n2, n3), n1]; both endpoint limits are well defined (the birth
    condition at the lower end, h -> 0 with the atan branch at pi/2 at the
    upper end).  Values outside raise DomainError.
    """
    if not stack.is_guiding:
        raise DomainError(
            f"no guiding interval: n1 > max(n2, n3) required "
            f"(got n1={stack.n1}, max(n2, n3)={stack.n_hi})"
        )
    if not (stack.n_hi <= n_eff <= stack.n1):
        raise DomainError(
            f"n_eff={n_eff} outside the confined interval "
            f"[{stack.n_hi}, {stack.n1}]"
        )
    return backend.slab_residual(n_eff, stack.n1, stack.n2, stack.n3,
                                 ctx.k * stack.d, pol is Polarization.TM, order)


def _solve_order(n1, n2, n3, dbar, tm, order):
    """Root of the residual for one (pol, order), or None if not confined.

    Existence test at the closed lower endpoint (F(n_hi) >= 0), so a mode
    exactly at birth is reported with n_eff = n_hi.  Bisection runs to float
    exhaustion (bracket width well below 1e-12) because the group-index
    finite difference needs n_eff at machine precision.
    """
    nhi = max(n2, n3)
    f_lo = backend.slab_residual(nhi, n1, n2, n3, dbar, tm, order)
    if f_lo < 0.0:
        return None
    if f_lo == 0.0:
        return nhi

    span = n1 - nhi
    guard = min(_ENDPOINT_GUARD, 1e-3 * span)
    a = nhi + guard
    b = n1 - guard

    # F decreases with n_eff: find a sign-change bracket [lo > 0, hi <= 0].
    if backend.slab_residual(a, n1, n2, n3, dbar, tm, order) <= 0.0:
        lo, hi = nhi, a
    elif backend.slab_residual(b, n1, n2, n3, dbar, tm, order) > 0.0:
        lo, hi = b, n1
    else:
        lo, hi = backend.slab_scan_bracket(a, b, _PRESCAN_POINTS, n1, n2, n3,
                                           dbar, tm, order)

    return backend.slab_solve_bracket(lo, hi, n1, n2, n3, dbar, tm, order)


def solve_branch(stack: WaveguideStack, ctx: OpticalContext,
                 pol: Polarization, order: int):
    """n_eff of one branch, or None when (pol, order) is not confined."""
    if not stack.is_guiding:
        return None
    return _solve_order(stack.n1, stack.n2, stack.n3, ctx.k * stack.d,
                        pol is Polarization.TM, order)


def mode_count(stack: WaveguideStack, ctx: OpticalContext, pol: Polarization) -> int:
    """Number of confined modes of one polarization, from the endpoint phase."""
    if not stack.is_guiding:
        return 0
    f0 = backend.slab_residual(stack.n_hi, stack.n1, stack.n2, stack.n3,
                               ctx.k * stack.d, pol is Polarization.TM, 0)
    if f0 < 0.0:
        return 0
    return int(math.floor(f0 / math.pi)) + 1


def _nbeta_of_branch(n1, n2, n3, dbar, tm, order):
    """n_eff * dbar of one branch at dimensionless thickness dbar."""
    neff = _solve_order(n1, n2, n3, dbar, tm, order)
    if neff is None:
        raise CutoffError(
            f"mode order {order} vanishes at perturbed wavenumber (k*d={dbar:.6e})"
        )
    return neff * dbar


def _centered_fd(n1, n2, n3, dbar, tm, order, delta):
    """d(n_eff*k)/dk via dbar: n_group = d(n_eff*dbar)/d(dbar).

    Working purely in dbar = k*d keeps the derivative bit-identical under
    uniform length scaling (k*(1+delta)*d and k*d*(1+delta) round differently,
    and the 1/delta amplification would break the scaling symmetry at 1e-10).
    """
    bp = _nbeta_of_branch(n1, n2, n3, dbar * (1.0 + delta), tm, order)
    bm = _nbeta_of_branch(n1, n2, n3, dbar * (1.0 - delta), tm, order)
    return (bp - bm) / (2.0 * dbar * delta)


def group_index(stack: WaveguideStack, ctx: OpticalContext, mode: GuidedMode) -> float:
    """Group index d(beta)/dk by centered finite difference with Richardson check.

    The branch (pol, order) is re-solved at k*(1 +/- delta) for delta = 1e-6
    and 5e-7; the two estimates are Richardson-combined and must agree, else
    ConvergenceError.  A mode that vanishes at the perturbed wavenumber (at
    cutoff) raises CutoffError.
    """
    tm = mode.pol is Polarization.TM
    dbar = ctx.k * stack.d
    args = (stack.n1, stack.n2, stack.n3, dbar, tm, mode.order)
    g1 = _centered_fd(*args, _FD_DELTA)
    g2 = _centered_fd(*args, 0.5 * _FD_DELTA)
    ng = (4.0 * g2 - g1) / 3.0
    if abs(g2 - g1) > 1e-6 * abs(ng) + 1e-9:
        raise ConvergenceError(
            f"group-index finite difference did not converge for {mode.label}: "
            f"{g1!r} vs {g2!r}"
        )
    return ng


def _fill_group_index(stack, ctx, tm, order, neff, marginal):
    """Group index for a freshly solved branch, with one-sided fallback at cutoff."""
    if marginal:
        return neff  # rate is zero at birth; n_group is not meaningful there
    dbar = ctx.k * stack.d
    try:
        return _centered_fd(stack.n1, stack.n2, stack.n3, dbar, tm, order,
                            _FD_DELTA)
    except CutoffError:
        bp = _nbeta_of_branch(stack.n1, stack.n2, stack.n3,
                              dbar * (1.0 + _FD_DELTA), tm, order)
        return (bp - neff * dbar) / (dbar * _FD_DELTA)


def find_guided_modes(stack: WaveguideStack, ctx: OpticalContext) -> list[GuidedMode]:
    """All confined modes of both polarizations, TE first, ascending order.

    Each n_eff is certified by a sign-change bracket narrower than 1e-12; the
    per-polarization mode count matches the endpoint value of the phase
    function, so no root can be missed.  An empty list is a valid result for
    a stack with no confined modes.
    """
    out: list[GuidedMode] = []
    if not stack.is_guiding:
        return out
    k = ctx.k
    dbar = k * stack.d
    for pol in (Polarization.TE, Polarization.TM):
        tm = pol is Polarization.TM
        order = 0
        while True:
            neff = _solve_order(stack.n1, stack.n2, stack.n3, dbar, tm, order)
            if neff is None:
                break
            kap2 = k * math.sqrt(max(neff * neff - stack.n2 * stack.n2, 0.0))
            kap3 = k * math.sqrt(max(neff * neff - stack.n3 * stack.n3, 0.0))
            kap_birth = min(kap2, kap3) if stack.n2 == stack.n3 else (
                kap2 if stack.n2 > stack.n3 else kap3)
            marginal = (kap_birth / k) * dbar < _MARGINAL_KD
            ngroup = _fill_group_index(stack, ctx, tm, order, neff, marginal)
            out.append(GuidedMode(
                pol=pol, order=order, n_eff=neff, beta=neff * k,
                h=k * math.sqrt(max(stack.n1 * stack.n1 - neff * neff, 0.0)),
                kappa2=kap2, kappa3=kap3, n_group=ngroup, marginal=marginal,
            ))
            order += 1
    return out


def cutoff_thickness(n1: float, n2: float, n3: float, ctx: OpticalContext,
                     pol: Polarization, order: int) -> float:
    """Minimum film thickness (meters) confining mode (pol, order).

    At birth the mode sits at n_eff = max(n2, n3) with zero decay on that
    side; the closed form follows from the dispersion relation there.  Zero
    for order 0 of a symmetric stack (such modes have no cutoff).
    """
    nhi, nlo = max(n2, n3), min(n2, n3)
    if not (n1 > nhi >= 1.0):
        raise DomainError(
            f"guiding condition violated: need n1 > max(n2, n3) >= 1 "
            f"(got n1={n1}, n2={n2}, n3={n3})"
        )
    if order < 0:
        raise DomainError(f"mode order must be >= 0, got {order}")
    h_birth = math.sqrt(n1 * n1 - nhi * nhi)
    k_lo = math.sqrt(nhi * nhi - nlo * nlo)
    w_lo = (n1 * n1) / (nlo * nlo) if pol is Polarization.TM else 1.0
    return (order * math.pi + math.atan2(w_lo * k_lo, h_birth)) / (ctx.k * h_birth)


def evanescent_constants(mode: GuidedMode, stack: WaveguideStack,
                         ctx: OpticalContext) -> tuple[float, float]:
    """(kappa2, kappa3) in 1/m, re-evaluated from n_eff; zero exactly at birth."""
    if mode.n_eff < stack.n2 or mode.n_eff < stack.n3:
        side = 2 if mode.n_eff < stack.n2 else 3
        raise DomainError(
            f"mode not confined on side {side}: n_eff={mode.n_eff} < n{side}"
        )
    k = ctx.k
    kap2 = k * math.sqrt(mode.n_eff * mode.n_eff - stack.n2 * stack.n2)
    kap3 = k * math.sqrt(mode.n_eff * mode.n_eff - stack.n3 * stack.n3)
    return kap2, kap3
