"""Two-photon polarization/spectral amplitudes and the lossless optics acting on them.

A :class:`BiphotonState` holds ``A[k, p, q]``: the coefficient of one photon
at ``omega0 + v_k`` with polarization ``p`` and its partner at
``omega0 - v_k`` with polarization ``q`` (index 0 = H, 1 = V).  All optics
are diagonal in the bin index; a :class:`JonesField` carries one 2x2 matrix
per bin for each half of the spectrum.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .spectral import PhaseMask, SpectralGrid, Spectrum, check_same_grid

__all__ = [
    "BiphotonState",
    "JonesField",
    "BellLabel",
    "XY_FROM_HV",
    "source_state",
    "basis_rotation_45",
    "hwp",
    "hwp_matrix",
    "polarizer_matrix",
    "uniform_field",
    "identity_field",
    "apply_jones",
    "shaper_field",
    "apply_shaper",
    "fiber_channel",
    "to_xy_basis",
    "bell_matrix",
    "bell_state",
    "fidelity",
    "polarization_density_matrix",
    "random_unitary",
    "random_dispersion",
]

UNITARY_TOL = 1e-10
NORM_TOL = 1e-10

# Rows give the X and Y components in terms of H and V:
# |X> = (|H> + |V>)/sqrt2, |Y> = (|H> - |V>)/sqrt2.  Real symmetric and self-inverse.
XY_FROM_HV = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)


def _frozen(a):
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


def _is_unitary(m: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    eye = np.eye(2)
    prod = np.conj(np.swapaxes(m, -1, -2)) @ m
    return bool(np.all(np.abs(prod - eye) <= tol))


@dataclass(frozen=True, eq=False)
class BiphotonState:
    grid: SpectralGrid
    amplitude: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitude, dtype=complex)
        if amp.shape != (self.grid.n_bins, 2, 2):
            raise ValueError(
                f"state amplitude must have shape ({self.grid.n_bins}, 2, 2), got {amp.shape}"
            )
        if not np.all(np.isfinite(amp)):
            raise ValueError("state amplitude must be finite")
        object.__setattr__(self, "amplitude", _frozen(amp))

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitude) ** 2) * self.grid.dv)

    @property
    def bin_weights(self) -> np.ndarray:
        """Pair probability per bin."""
        return np.sum(np.abs(self.amplitude) ** 2, axis=(1, 2)) * self.grid.dv


@dataclass(frozen=True, eq=False)
class JonesField:
    """Per-bin 2x2 polarization transforms for the upper and lower half-spectra."""

    grid: SpectralGrid
    upper: np.ndarray
    lower: np.ndarray

    def __post_init__(self):
        for name in ("upper", "lower"):
            m = np.asarray(getattr(self, name), dtype=complex)
            if m.shape != (self.grid.n_bins, 2, 2):
                raise ValueError(
                    f"{name} must have shape ({self.grid.n_bins}, 2, 2), got {m.shape}"
                )
            if not _is_unitary(m):
                raise ValueError(f"JonesField.{name} is not unitary within {UNITARY_TOL}")
            object.__setattr__(self, name, _frozen(m))

    def __matmul__(self, other: "JonesField") -> "JonesField":
        """Field equivalent to applying ``other`` first, then ``self``."""
        check_same_grid(self.grid, other.grid)
        return JonesField(self.grid, self.upper @ other.upper, self.lower @ other.lower)


class BellLabel(enum.Enum):
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"

    @classmethod
    def parse(cls, text: str) -> "BellLabel":
        key = str(text).strip().lower().replace("_", "")
        aliases = {
            "phi+": cls.PHI_PLUS, "phiplus": cls.PHI_PLUS,
            "phi-": cls.PHI_MINUS, "phiminus": cls.PHI_MINUS,
            "psi+": cls.PSI_PLUS, "psiplus": cls.PSI_PLUS,
            "psi-": cls.PSI_MINUS, "psiminus": cls.PSI_MINUS, "singlet": cls.PSI_MINUS,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown Bell label {text!r}") from None


def bell_matrix(label: BellLabel, basis: str = "HV") -> np.ndarray:
    """2x2 polarization coefficients ``c[p, q]`` of a Bell state, in H/V indices.

    ``basis="XY"`` builds the state with the same signs over the X/Y axes and
    re-expresses it in H/V.
    """
    s = 1.0 / np.sqrt(2.0)
    c = {
        BellLabel.PHI_PLUS: [[s, 0], [0, s]],
        BellLabel.PHI_MINUS: [[s, 0], [0, -s]],
        BellLabel.PSI_PLUS: [[0, s], [s, 0]],
        BellLabel.PSI_MINUS: [[0, s], [-s, 0]],
    }[label]
    c = np.array(c, dtype=complex)
    if basis.upper() == "HV":
        return c
    if basis.upper() == "XY":
        # c_hv = M^T c_xy M with M the XY<-HV change of basis (real symmetric)
        return XY_FROM_HV.T @ c @ XY_FROM_HV
    raise ValueError(f"basis must be 'HV' or 'XY', got {basis!r}")


def source_state(spectrum: Spectrum, beta: float) -> BiphotonState:
    """Pairs from the two crossed type-I crystals with LCC phase ``beta``:
    ``g/sqrt2 (|HH> + e^{i beta} |VV>)``.  ``beta = pi`` gives the canonical state."""
    g = spectrum.amplitude
    amp = np.zeros((spectrum.grid.n_bins, 2, 2), dtype=complex)
    amp[:, 0, 0] = g / np.sqrt(2.0)
    amp[:, 1, 1] = np.exp(1j * beta) * g / np.sqrt(2.0)
    return BiphotonState(spectrum.grid, amp)


def uniform_field(grid: SpectralGrid, matrix) -> JonesField:
    """Frequency-flat field applying ``matrix`` to every photon."""
    m = np.broadcast_to(np.asarray(matrix, dtype=complex), (grid.n_bins, 2, 2))
    return JonesField(grid, m, m)


def identity_field(grid: SpectralGrid) -> JonesField:
    return uniform_field(grid, np.eye(2))


def basis_rotation_45(grid: SpectralGrid) -> JonesField:
    """Field taking (H, V) components to (X, Y) components."""
    return uniform_field(grid, XY_FROM_HV)


def hwp_matrix(alpha_over_2: float) -> np.ndarray:
    """Half-wave plate with its axis at ``alpha_over_2`` from H.

    Maps linear polarization at angle ``alpha = 2 * alpha_over_2`` onto H
    (and its orthogonal partner onto -V).
    """
    c, s = np.cos(2 * alpha_over_2), np.sin(2 * alpha_over_2)
    return np.array([[c, s], [s, -c]], dtype=complex)


def hwp(grid: SpectralGrid, alpha_over_2: float) -> JonesField:
    return uniform_field(grid, hwp_matrix(alpha_over_2))


def polarizer_matrix(alpha: float) -> np.ndarray:
    """Linear polarizer transmitting polarization at ``alpha`` from H (a projector)."""
    c, s = np.cos(alpha), np.sin(alpha)
    return np.array([[c * c, c * s], [c * s, s * s]], dtype=complex)


def _transform(amplitude: np.ndarray, upper: np.ndarray, lower: np.ndarray) -> np.ndarray:
    # A'[k] = upper[k] @ A[k] @ lower[k]^T  ==  (upper ⊗ lower) vec(A)
    return upper @ amplitude @ np.swapaxes(lower, -1, -2)


def apply_jones(state: BiphotonState, field: JonesField) -> BiphotonState:
    """Transform the +v photon by ``field.upper`` and the -v photon by ``field.lower``."""
    check_same_grid(state.grid, field.grid)
    return BiphotonState(state.grid, _transform(state.amplitude, field.upper, field.lower))


def _phase_diag(theta_x: np.ndarray, theta_y: np.ndarray) -> np.ndarray:
    phases = np.zeros(theta_x.shape + (2, 2), dtype=complex)
    phases[:, 0, 0] = np.exp(1j * theta_x)
    phases[:, 1, 1] = np.exp(1j * theta_y)
    return XY_FROM_HV @ phases @ XY_FROM_HV


def shaper_field(mask_x: PhaseMask, mask_y: PhaseMask) -> JonesField:
    """Pulse shaper with one SLM per principal axis: at every frequency,
    ``diag(e^{i theta_X}, e^{i theta_Y})`` in the X/Y basis."""
    check_same_grid(mask_x.grid, mask_y.grid)
    return JonesField(
        mask_x.grid,
        _phase_diag(mask_x.phase_upper, mask_y.phase_upper),
        _phase_diag(mask_x.phase_lower, mask_y.phase_lower),
    )


def apply_shaper(state: BiphotonState, mask_x: PhaseMask, mask_y: PhaseMask) -> BiphotonState:
    return apply_jones(state, shaper_field(mask_x, mask_y))


def to_xy_basis(state: BiphotonState) -> BiphotonState:
    """Re-express the amplitude over X/Y indices (index 0 = X, 1 = Y)."""
    return apply_jones(state, basis_rotation_45(state.grid))


def fiber_channel(state: BiphotonState, dispersion_phase: PhaseMask, birefringence) -> BiphotonState:
    """Common-mode fiber: the same spectral phase on both polarizations plus a
    frequency-flat unitary ``U`` acting on both photons."""
    check_same_grid(state.grid, dispersion_phase.grid)
    u = np.asarray(birefringence, dtype=complex)
    if u.shape != (2, 2) or not _is_unitary(u):
        raise ValueError("birefringence must be a 2x2 unitary within 1e-10")
    upper = np.exp(1j * dispersion_phase.phase_upper)[:, None, None] * u
    lower = np.exp(1j * dispersion_phase.phase_lower)[:, None, None] * u
    return apply_jones(state, JonesField(state.grid, upper, lower))


def bell_state(label: BellLabel, spectrum: Spectrum, basis: str = "HV") -> BiphotonState:
    """Ideal Bell state with constant polarization coefficients, dressed by ``g``."""
    amp = spectrum.amplitude[:, None, None] * bell_matrix(label, basis)[None, :, :]
    return BiphotonState(spectrum.grid, amp)


def polarization_density_matrix(state: BiphotonState) -> np.ndarray:
    """Two-photon polarization density matrix with the frequency traced out.

    Returned as a 4x4 array in the (HH, HV, VH, VV) ordering of (+v, -v) photons.
    """
    vecs = state.amplitude.reshape(state.grid.n_bins, 4)
    rho = np.einsum("ki,kj->ij", vecs, np.conj(vecs)) * state.grid.dv
    return rho / np.trace(rho).real


def fidelity(state: BiphotonState, label: BellLabel, spectrum: Spectrum | None = None,
             basis: str = "HV") -> float:
    """Polarization fidelity ``<B| rho_pol |B>`` with the frequency traced out.

    Bin-dependent phases (dispersion, envelope phase) do not count against
    the fidelity; only the polarization structure in every bin does.
    ``spectrum`` only serves as a grid-compatibility check.
    """
    if spectrum is not None:
        check_same_grid(state.grid, spectrum.grid)
    b = bell_matrix(label, basis)
    overlaps = np.einsum("pq,kpq->k", np.conj(b), state.amplitude)
    f = float(np.sum(np.abs(overlaps) ** 2) * state.grid.dv / state.norm)
    return min(max(f, 0.0), 1.0)


def random_unitary(rng: np.random.Generator) -> np.ndarray:
    """Haar-random 2x2 unitary."""
    from scipy.stats import unitary_group

    return unitary_group.rvs(2, random_state=rng)


def random_dispersion(grid: SpectralGrid, rng: np.random.Generator, order: int = 5,
                      scale: float = 3.0) -> PhaseMask:
    """Smooth spectral phase ``sum_n c_n ((omega - omega0)/detuning_max)^n`` with
    ``c_n ~ N(0, scale^2)`` for ``n = 0..order``."""
    coeffs = rng.normal(0.0, scale, size=order + 1)
    x_up = grid.detunings / grid.detuning_max
    return PhaseMask(
        grid,
        np.polynomial.polynomial.polyval(x_up, coeffs),
        np.polynomial.polynomial.polyval(-x_up, coeffs),
    )
