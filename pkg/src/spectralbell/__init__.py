"""Simulation of spectrally shaped, collinear time-energy entangled photon pairs:
shaped Hong-Ou-Mandel interference, Bell-state synthesis with a
phase-and-polarization pulse shaper, and decoherence-free transport checks."""

from .bell import (
    RECIPES,
    BellCurves,
    BellRecipe,
    bell_curves,
    cauchy_schwarz,
    curve_visibilities,
    fidelity_lower_bound,
    synthesize,
)
from .biphoton import (
    BellLabel,
    BiphotonState,
    JonesField,
    apply_jones,
    apply_shaper,
    basis_rotation_45,
    bell_state,
    fiber_channel,
    fidelity,
    hwp,
    source_state,
)
from .interference import (
    DetectionConfig,
    DetectionMode,
    ScanCurve,
    coincidence_closed_form,
    coincidence_oracle,
    hom_scan,
    step_scan,
    visibility,
    zero_coincidence_certificate,
)
from .kernels import BACKEND
from .spectral import (
    PhaseMask,
    SpectralGrid,
    Spectrum,
    antisymmetric_part,
    make_grid,
    mask_custom,
    mask_linear,
    mask_pi_step,
    mask_zero,
    spectrum_from_samples,
    spectrum_gaussian,
    spectrum_type1,
    symmetric_part,
    theta_xy,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BellCurves",
    "BellLabel",
    "BellRecipe",
    "BiphotonState",
    "DetectionConfig",
    "DetectionMode",
    "JonesField",
    "PhaseMask",
    "RECIPES",
    "ScanCurve",
    "SpectralGrid",
    "Spectrum",
    "antisymmetric_part",
    "apply_jones",
    "apply_shaper",
    "basis_rotation_45",
    "bell_curves",
    "bell_state",
    "cauchy_schwarz",
    "coincidence_closed_form",
    "coincidence_oracle",
    "curve_visibilities",
    "fiber_channel",
    "fidelity",
    "fidelity_lower_bound",
    "hom_scan",
    "hwp",
    "make_grid",
    "mask_custom",
    "mask_linear",
    "mask_pi_step",
    "mask_zero",
    "source_state",
    "spectrum_from_samples",
    "spectrum_gaussian",
    "spectrum_type1",
    "step_scan",
    "symmetric_part",
    "synthesize",
    "theta_xy",
    "visibility",
    "zero_coincidence_certificate",
]
