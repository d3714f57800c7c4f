"""Mode field profiles, effective thickness and normalization.

Profiles are piecewise: cosine inside the film matched to decaying
exponentials in the claddings.  The global phase is fixed so the reference
component at the film's top surface (z = 0+) is real and positive: Ey for TE,
Ez for TM (whose Ex is then purely imaginary, 90 degrees out of phase).

Normalization makes modes delta-normalized on the in-plane wavevector
continuum: the energy integral of the transverse profile,
int eps_r(z) |u(z)|^2 dz (all field components), equals one with lengths in
units of 1/k.  With that convention the golden-rule rate into one mode branch,
integrated over propagation direction, is

    w/w0 = (3*pi/4) * n_eff * n_group * |u_t(Z)|^2      (in-plane dipole)
    w/w0 = (3*pi/2) * n_eff * n_group * |u_z(Z)|^2      (perpendicular dipole)

and the residue of the classical reflection-pole integral reproduces these
rates, which is the operational test of the convention (see rates module).

Effective-thickness bookkeeping: d_eff is defined from the plain intensity
integral with the film-peak amplitude as reference,
d_eff = 2 * int |u(z)|^2 dz / max_film |u|^2, which for TE collapses to the
classical closed form d + 1/kappa2 + 1/kappa3.  For TM the same definition is
used (no simple closed form exists for the ratio; the value here is assembled
from the exact piecewise integrals).  d_eff diverges for a mode at birth.
"""
import math

from .errors import DomainError
from .types import (FieldSample, GuidedMode, NormalizedProfile, OpticalContext,
                    Polarization, Region, WaveguideStack)


def _barred(mode: GuidedMode, ctx: OpticalContext):
    """(h, kappa2, kappa3) in units of k."""
    k = ctx.k
    return mode.h / k, mode.kappa2 / k, mode.kappa3 / k


class _TEProfile:
    def __init__(self, mode, stack, ctx):
        h, k2, k3 = _barred(mode, ctx)
        self.h, self.k2, self.k3 = h, k2, k3
        self.dbar = ctx.k * stack.d
        self.phi3 = math.atan2(k3, h)
        self.phi2 = math.atan2(k2, h)
        self.sign2 = -1.0 if mode.order % 2 else 1.0
        self.c3 = math.cos(self.phi3)
        self.c2 = math.cos(self.phi2)

    def ey(self, zbar):
        if zbar >= 0.0:
            return self.c3 * math.exp(-self.k3 * zbar)
        if zbar >= -self.dbar:
            return math.cos(self.h * zbar + self.phi3)
        return self.sign2 * self.c2 * math.exp(self.k2 * (zbar + self.dbar))

    def norm_integral(self, n1, n2, n3, neff):
        # int eps_r * Ey^2 dz (units of 1/k); exact piecewise result
        if self.k2 == 0.0 or self.k3 == 0.0:
            return math.inf
        return (n1 * n1 * self.dbar / 2.0
                + neff * neff / (2.0 * self.k2)
                + neff * neff / (2.0 * self.k3))

    def intensity_integral(self):
        # int Ey^2 dz; film-peak amplitude is 1, so this is d_eff/2
        if self.k2 == 0.0 or self.k3 == 0.0:
            return math.inf
        return 0.5 * (self.dbar + 1.0 / self.k2 + 1.0 / self.k3)

    def film_peak_sq(self):
        return 1.0

    def ref_amplitude(self):
        return self.c3  # Ey at z = 0+


class _TMProfile:
    def __init__(self, mode, stack, ctx):
        h, k2, k3 = _barred(mode, ctx)
        self.h, self.k2, self.k3 = h, k2, k3
        self.dbar = ctx.k * stack.d
        self.n1, self.n2, self.n3 = stack.n1, stack.n2, stack.n3
        self.neff = mode.n_eff
        w2 = (stack.n1 / stack.n2) ** 2
        w3 = (stack.n1 / stack.n3) ** 2
        self.psi3 = math.atan2(w3 * k3, h)
        self.psi2 = math.atan2(w2 * k2, h)
        self.sign2 = -1.0 if mode.order % 2 else 1.0
        self.c3 = math.cos(self.psi3)
        self.c2 = math.cos(self.psi2)
        self.order = mode.order

    # Magnetic profile Hy has film-peak 1; E = (i*Hy'/eps, 0, neff*Hy/eps)
    # with the sign chosen so Ez(0+) > 0.
    def _hy_hyp(self, zbar):
        if zbar >= 0.0:
            hy = self.c3 * math.exp(-self.k3 * zbar)
            return hy, -self.k3 * hy, self.n3 * self.n3
        if zbar >= -self.dbar:
            th = self.h * zbar + self.psi3
            return math.cos(th), -self.h * math.sin(th), self.n1 * self.n1
        hy = self.sign2 * self.c2 * math.exp(self.k2 * (zbar + self.dbar))
        return hy, self.k2 * hy, self.n2 * self.n2

    def exz(self, zbar):
        hy, hyp, eps = self._hy_hyp(zbar)
        return 1j * hyp / eps, self.neff * hy / eps

    def norm_integral(self):
        # int eps_r (|Ex|^2 + |Ez|^2) dz = int (neff^2 Hy^2 + Hy'^2)/eps dz
        if self.k2 == 0.0 or self.k3 == 0.0:
            return math.inf
        ne2 = self.neff * self.neff
        h2 = self.h * self.h
        s23 = math.sin(2.0 * self.psi3) + math.sin(2.0 * self.psi2)
        cover = (ne2 + self.k3 * self.k3) * self.c3 * self.c3 / (
            2.0 * self.k3 * self.n3 * self.n3)
        sub = (ne2 + self.k2 * self.k2) * self.c2 * self.c2 / (
            2.0 * self.k2 * self.n2 * self.n2)
        film = ((ne2 + h2) * self.dbar / 2.0
                + (ne2 - h2) * s23 / (4.0 * self.h)) / (self.n1 * self.n1)
        return cover + sub + film

    def intensity_integral(self):
        # int (|Ex|^2 + |Ez|^2) dz, unweighted
        if self.k2 == 0.0 or self.k3 == 0.0:
            return math.inf
        ne2 = self.neff * self.neff
        h2 = self.h * self.h
        s23 = math.sin(2.0 * self.psi3) + math.sin(2.0 * self.psi2)
        cover = (ne2 + self.k3 * self.k3) * self.c3 * self.c3 / (
            2.0 * self.k3 * self.n3 ** 4)
        sub = (ne2 + self.k2 * self.k2) * self.c2 * self.c2 / (
            2.0 * self.k2 * self.n2 ** 4)
        film = ((ne2 + h2) * self.dbar / 2.0
                + (ne2 - h2) * s23 / (4.0 * self.h)) / self.n1 ** 4
        return cover + sub + film

    def film_peak_sq(self):
        # max over the film of |Ex|^2+|Ez|^2 = (neff^2 cos^2 th + h^2 sin^2 th)/n1^4
        # with th in [-psi2 - order*pi, psi3]; th = 0 is always attained.
        ne2 = self.neff * self.neff
        h2 = self.h * self.h
        cands = [ne2]
        if self.order >= 1:
            cands.append(h2)  # th = +-pi/2 reachable
        for th in (self.psi3, -self.psi2 - self.order * math.pi):
            c, s = math.cos(th), math.sin(th)
            cands.append(ne2 * c * c + h2 * s * s)
        return max(cands) / self.n1 ** 4

    def ref_amplitude(self):
        return self.neff * self.c3 / (self.n3 * self.n3)  # Ez at z = 0+


def field_profile(mode: GuidedMode, stack: WaveguideStack, ctx: OpticalContext,
                  z: float) -> FieldSample:
    """Unnormalized transverse field of a solved mode at height z (meters).

    z > 0 is the cover (emitter side), -d <= z <= 0 the film, z < -d the
    substrate.  The transverse phase factor exp(-i beta x) along the
    propagation direction is not included.  TE carries Ey only; TM carries
    (Ex, Ez) with Ex purely imaginary relative to Ez.
    """
    zbar = ctx.k * z
    if z > 0:
        region = Region.COVER
    elif z >= -stack.d:
        region = Region.FILM
    else:
        region = Region.SUBSTRATE
    if mode.pol is Polarization.TE:
        ey = _TEProfile(mode, stack, ctx).ey(zbar)
        return FieldSample(z=z, Ey=complex(ey), Ex=0j, Ez=0j, region=region)
    ex, ez = _TMProfile(mode, stack, ctx).exz(zbar)
    return FieldSample(z=z, Ey=0j, Ex=ex, Ez=complex(ez), region=region)


def effective_thickness(mode: GuidedMode, stack: WaveguideStack,
                        ctx: OpticalContext) -> float:
    """Effective thickness d_eff in meters; inf for a mode at birth.

    TE: the closed form d + 1/kappa2 + 1/kappa3.  TM: the same
    intensity-based definition evaluated from the exact piecewise integrals.
    """
    if mode.pol is Polarization.TE:
        if mode.kappa2 == 0.0 or mode.kappa3 == 0.0:
            return math.inf
        return stack.d + 1.0 / mode.kappa2 + 1.0 / mode.kappa3
    prof = _TMProfile(mode, stack, ctx)
    ii = prof.intensity_integral()
    if math.isinf(ii):
        return math.inf
    return 2.0 * ii / prof.film_peak_sq() / ctx.k


def normalization_constant(mode: GuidedMode, stack: WaveguideStack,
                           ctx: OpticalContext) -> NormalizedProfile:
    """Normalization constant A and effective thickness of a solved mode.

    A is the z=0+ amplitude of the reference component once the profile is
    scaled to unit energy integral (delta normalization on the in-plane
    wavevector).  A = 0 for a mode exactly at birth: the evanescent amplitude
    vanishes there and so do all its rates.
    """
    if mode.pol is Polarization.TE:
        prof = _TEProfile(mode, stack, ctx)
        inorm = prof.norm_integral(stack.n1, stack.n2, stack.n3, mode.n_eff)
    else:
        prof = _TMProfile(mode, stack, ctx)
        inorm = prof.norm_integral()
    a = 0.0 if math.isinf(inorm) else prof.ref_amplitude() / math.sqrt(inorm)
    return NormalizedProfile(mode=mode, A=a, d_eff=effective_thickness(mode, stack, ctx))


def normalized_field(profile: NormalizedProfile, stack: WaveguideStack,
                     ctx: OpticalContext, z: float) -> FieldSample:
    """Field sample scaled so the reference component at z=0+ equals profile.A."""
    mode = profile.mode
    raw = field_profile(mode, stack, ctx, z)
    if mode.pol is Polarization.TE:
        ref = _TEProfile(mode, stack, ctx).ref_amplitude()
    else:
        ref = _TMProfile(mode, stack, ctx).ref_amplitude()
    if ref == 0.0:
        raise DomainError(f"mode {mode.label} has no cover amplitude to normalize")
    s = profile.A / ref
    return FieldSample(z=raw.z, Ey=raw.Ey * s, Ex=raw.Ex * s, Ez=raw.Ez * s,
                       region=raw.region)
