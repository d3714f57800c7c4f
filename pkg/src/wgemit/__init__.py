"""wgemit: spontaneous emission into planar slab waveguide modes.

Solves the confined TE/TM modes of a lossless three-layer slab, computes the
spontaneous-emission rate of a dipole above the film into each mode and in
total, and derives the branching ratios, height/thickness sweeps and
thickness optimization built on top of them.
"""
from .backend import BACKEND_NAME, HAVE_SPEEDUPS
from .errors import (ConvergenceError, CutoffError, DomainError, NoModesError,
                     WgemitError)
from .fields import (effective_thickness, field_profile, normalization_constant,
                     normalized_field)
from .modes import (cutoff_thickness, dispersion_residual, evanescent_constants,
                    find_guided_modes, group_index, mode_count, solve_branch)
from .rates import (branching_ratio, guided_rate, guided_rate_from_profile,
                    guided_rate_via_residue, reflection_coefficients, total_rate)
from .sweeps import (fig2_spec, fig3_spec, optimize_thickness, scaling_check,
                     sweep_height, sweep_thickness)
from .types import (C_LIGHT, DipoleEmitter, EmissionReport, FieldSample,
                    GuidedMode, NormalizedProfile, OpticalContext, Polarization,
                    PropagationDirection, Region, StackReflection, SweepSpec,
                    SweepTable, WaveguideStack)

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME", "HAVE_SPEEDUPS", "C_LIGHT", "__version__",
    "WgemitError", "DomainError", "CutoffError", "ConvergenceError",
    "NoModesError",
    "Polarization", "Region", "WaveguideStack", "OpticalContext", "GuidedMode",
    "PropagationDirection", "DipoleEmitter", "FieldSample", "NormalizedProfile",
    "StackReflection", "EmissionReport", "SweepSpec", "SweepTable",
    "dispersion_residual", "find_guided_modes", "cutoff_thickness",
    "evanescent_constants", "group_index", "mode_count", "solve_branch",
    "field_profile", "effective_thickness", "normalization_constant",
    "normalized_field",
    "reflection_coefficients", "guided_rate", "guided_rate_from_profile",
    "guided_rate_via_residue", "total_rate", "branching_ratio",
    "sweep_height", "sweep_thickness", "scaling_check", "optimize_thickness",
    "fig2_spec", "fig3_spec",
]
