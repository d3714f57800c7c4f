"""Domain types: waveguide geometry, modes, emitters, reports.

All lengths at the API boundary are in meters; everything is converted to the
dimensionless form (lengths measured in units of 1/k = lambda0/2pi) inside the
numerics, which makes uniform length scaling an exact symmetry.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import DomainError

C_LIGHT = 299792458.0  # m/s


class Polarization(enum.Enum):
    TE = "TE"
    TM = "TM"


class Region(enum.Enum):
    COVER = "cover"
    FILM = "film"
    SUBSTRATE = "substrate"


@dataclass(frozen=True)
class WaveguideStack:
    """Three-layer slab: film (n1, thickness d) between substrate (n2) and cover (n3).

    The emitter sits on the cover side.  Indices are real (lossless).  The
    guiding condition n1 > max(n2, n3) is required by the mode solver; stacks
    with n1 == max(n2, n3) are accepted so that reflection/total-rate
    computations can handle degenerate (non-guiding) geometries.
    """

    n1: float
    n2: float
    n3: float
    d: float  # film thickness, meters

    def __post_init__(self):
        for name in ("n1", "n2", "n3", "d"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise DomainError(f"{name} must be a real number, got {v!r}")
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, float(v))
        if self.n2 < 1.0 or self.n3 < 1.0:
            raise DomainError(
                f"cladding indices must satisfy min(n2, n3) >= 1 "
                f"(got n2={self.n2}, n3={self.n3})"
            )
        if self.n1 < max(self.n2, self.n3):
            raise DomainError(
                f"guiding condition violated: n1 > max(n2, n3) required "
                f"(got n1={self.n1} < max(n2, n3)={max(self.n2, self.n3)})"
            )
        if self.d <= 0.0:
            raise DomainError(f"film thickness must satisfy d > 0 (got d={self.d})")

    @property
    def is_guiding(self) -> bool:
        """True when a guided-mode interval max(n2, n3) < n_eff < n1 exists."""
        return self.n1 > max(self.n2, self.n3)

    @property
    def n_hi(self) -> float:
        """Higher cladding index; modes are born on this side."""
        return max(self.n2, self.n3)

    @property
    def n_lo(self) -> float:
        return min(self.n2, self.n3)


@dataclass(frozen=True)
class OpticalContext:
    """Vacuum wavelength and derived wavenumber (k * lambda0 = 2*pi by construction)."""

    lambda0: float  # meters

    def __post_init__(self):
        if not (isinstance(self.lambda0, (int, float)) and self.lambda0 > 0
                and math.isfinite(self.lambda0)):
            raise DomainError(f"lambda0 must be positive and finite, got {self.lambda0!r}")
        object.__setattr__(self, "lambda0", float(self.lambda0))

    @property
    def k(self) -> float:
        """Vacuum wavenumber 2*pi/lambda0, 1/m."""
        return 2.0 * math.pi / self.lambda0

    @property
    def omega(self) -> float:
        return C_LIGHT * self.k


@dataclass(frozen=True)
class GuidedMode:
    """One confined slab mode at a fixed vacuum wavelength.

    kappa2/kappa3 are the evanescent decay constants k*sqrt(n_eff^2 - nj^2)
    into substrate/cover; h is the transverse wavenumber inside the film;
    n_group = d(beta)/dk.  `marginal` flags modes within numerical distance of
    their birth (kappa on the birth side * d < 1e-9).
    """

    pol: Polarization
    order: int
    n_eff: float
    beta: float       # 1/m
    h: float          # 1/m
    kappa2: float     # 1/m
    kappa3: float     # 1/m
    n_group: float
    marginal: bool = False

    @property
    def label(self) -> str:
        return f"{self.pol.value}{self.order}"


@dataclass(frozen=True)
class PropagationDirection:
    """In-plane azimuth of a guided mode: (k_x, k_y) = beta*(cos phi, sin phi)."""

    phi: float

    def __post_init__(self):
        if not (0.0 <= self.phi < 2.0 * math.pi):
            raise DomainError(f"phi must lie in [0, 2*pi), got {self.phi}")

    def in_plane_wavevector(self, beta: float) -> tuple[float, float]:
        return (beta * math.cos(self.phi), beta * math.sin(self.phi))


@dataclass(frozen=True)
class DipoleEmitter:
    """Two-level dipole emitter in the cover region at height Z above the film.

    `orientation` is normalized to a unit vector at construction.  The dipole
    magnitude never enters: every rate is reported relative to the free-space
    rate w0, in which it cancels.
    """

    lambda0: float                              # meters
    orientation: tuple[float, float, float]
    Z: float                                    # meters, >= 0

    def __post_init__(self):
        if not (self.lambda0 > 0 and math.isfinite(self.lambda0)):
            raise DomainError(f"lambda0 must be positive, got {self.lambda0}")
        if self.Z < 0 or not math.isfinite(self.Z):
            raise DomainError(f"emitter height must satisfy Z >= 0, got {self.Z}")
        o = tuple(float(c) for c in self.orientation)
        if len(o) != 3:
            raise DomainError("orientation must be a 3-vector")
        norm = math.sqrt(o[0] * o[0] + o[1] * o[1] + o[2] * o[2])
        if not (norm > 0 and math.isfinite(norm)):
            raise DomainError("orientation must be a nonzero finite vector")
        object.__setattr__(self, "orientation", (o[0] / norm, o[1] / norm, o[2] / norm))

    @classmethod
    def perpendicular(cls, lambda0: float, Z: float) -> "DipoleEmitter":
        """Transition dipole along z (normal to the film)."""
        return cls(lambda0, (0.0, 0.0, 1.0), Z)

    @classmethod
    def parallel(cls, lambda0: float, Z: float) -> "DipoleEmitter":
        """Transition dipole in the film plane."""
        return cls(lambda0, (1.0, 0.0, 0.0), Z)


@dataclass(frozen=True)
class FieldSample:
    """Electric field of one mode at a height z (relative to the film top, z>0 in cover)."""

    z: float
    Ey: complex
    Ex: complex
    Ez: complex
    region: Region


@dataclass(frozen=True)
class NormalizedProfile:
    """A solved mode together with its normalization constant A.

    A is the cover-side amplitude at z=0+ of the reference field component
    (Ey for TE, Ez for TM) of the delta-normalized profile, in units where
    lengths are multiples of 1/k.  Rates scale as A**2.  d_eff is the
    effective thickness (film + evanescent penetrations), meters; it diverges
    (inf) for a mode exactly at birth.
    """

    mode: GuidedMode
    A: float
    d_eff: float


@dataclass(frozen=True)
class StackReflection:
    """Reflection coefficients of film+substrate seen from the cover at in-plane index u."""

    u: complex
    r_s: complex
    r_p: complex


@dataclass(frozen=True)
class EmissionReport:
    """Normalized emission rates and branching ratios at one (stack, emitter) point."""

    per_mode: tuple[tuple[str, float], ...]   # (mode label, w_mode/w0)
    total: float                              # w_tot/w0
    branching: tuple[tuple[str, float], ...]  # (mode label, P = w_mode/w_tot)
    guided_sum: float                         # sum of branching ratios

    def branching_dict(self) -> dict[str, float]:
        return dict(self.branching)


@dataclass(frozen=True)
class SweepSpec:
    """Parameter sweep definition over emitter height or film thickness.

    grid = (start, stop, npoints) in meters along `axis`; spacing "auto"
    resolves to logarithmic for height sweeps and linear for thickness sweeps.
    Z is the emitter height used by thickness sweeps.
    """

    scenario: str                 # "fig2_ta2o5" | "fig3_symmetric" | "custom"
    stack: WaveguideStack
    lambda0: float
    orientation: tuple[float, float, float]
    axis: str                     # "height" | "thickness"
    grid: tuple[float, float, int]
    per_mode: bool = True
    Z: float = 0.0
    spacing: str = "auto"         # "auto" | "log" | "linear"

    def __post_init__(self):
        if self.axis not in ("height", "thickness"):
            raise DomainError(f"axis must be 'height' or 'thickness', got {self.axis!r}")
        start, stop, n = self.grid
        if not (start < stop):
            raise DomainError(f"grid start must be < stop, got {self.grid}")
        if int(n) < 2:
            raise DomainError(f"grid needs npoints >= 2, got {n}")
        if self.spacing not in ("auto", "log", "linear"):
            raise DomainError(f"unknown spacing {self.spacing!r}")


@dataclass(frozen=True)
class SweepTable:
    """CSV-ready sweep result: fixed columns, one row per grid point."""

    columns: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...] = field(default_factory=tuple)

    def csv_text(self) -> str:
        """Render as CSV: header row, 12 significant digits, '\\n' line ends."""
        lines = [",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(f"{v:.11e}" for v in row))
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(self.csv_text())

    def column(self, name: str) -> list[float]:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]
