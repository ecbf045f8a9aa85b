"""Detuning grid, spectral amplitude models and spectral phase masks.

Everything is sampled on a uniform midpoint grid of detunings
``upsilon_k = (k + 1/2) * dv`` on ``(0, detuning_max]``.  Bin ``k`` stands
for the conjugate frequency pair ``(omega0 + upsilon_k, omega0 - upsilon_k)``
occupied by the two photons of a pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SpectralGrid",
    "Spectrum",
    "PhaseMask",
    "make_grid",
    "spectrum_gaussian",
    "spectrum_type1",
    "spectrum_from_samples",
    "type1_curvature_for_fwhm",
    "mask_zero",
    "mask_linear",
    "mask_pi_step",
    "mask_custom",
    "mask_from_function",
    "theta_xy",
    "antisymmetric_part",
    "symmetric_part",
    "check_same_grid",
]

NORM_TOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SpectralGrid:
    """Uniform midpoint sampling of detunings around the degenerate frequency."""

    omega0: float
    detuning_max: float
    n_bins: int

    def __post_init__(self):
        if int(self.n_bins) != self.n_bins or self.n_bins < 2:
            raise ValueError(f"n_bins must be an integer >= 2, got {self.n_bins!r}")
        if not np.isfinite(self.detuning_max) or self.detuning_max <= 0:
            raise ValueError(f"detuning_max must be positive, got {self.detuning_max!r}")
        if not np.isfinite(self.omega0) or self.omega0 <= self.detuning_max:
            raise ValueError(
                f"omega0 ({self.omega0!r}) must exceed detuning_max ({self.detuning_max!r}); "
                "otherwise the lower half-spectrum reaches negative frequencies"
            )
        object.__setattr__(self, "n_bins", int(self.n_bins))
        object.__setattr__(self, "omega0", float(self.omega0))
        object.__setattr__(self, "detuning_max", float(self.detuning_max))

    @property
    def dv(self) -> float:
        """Bin width in detuning."""
        return self.detuning_max / self.n_bins

    @property
    def detunings(self) -> np.ndarray:
        return (np.arange(self.n_bins) + 0.5) * self.dv

    @property
    def upper_frequencies(self) -> np.ndarray:
        return self.omega0 + self.detunings

    @property
    def lower_frequencies(self) -> np.ndarray:
        return self.omega0 - self.detunings


def make_grid(omega0: float, detuning_max: float, n_bins: int) -> SpectralGrid:
    return SpectralGrid(omega0, detuning_max, n_bins)


def check_same_grid(*grids: SpectralGrid) -> None:
    first = grids[0]
    for g in grids[1:]:
        if g != first:
            raise ValueError(f"grid mismatch: {first} vs {g}")


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Complex spectral amplitude ``g(upsilon_k)``, normalized so that
    ``sum |g|^2 dv == 1``."""

    grid: SpectralGrid
    amplitude: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitude, dtype=complex)
        if amp.shape != (self.grid.n_bins,):
            raise ValueError(
                f"spectrum needs {self.grid.n_bins} samples, got shape {amp.shape}"
            )
        if not np.all(np.isfinite(amp)):
            raise ValueError("spectrum amplitudes must be finite")
        norm = float(np.sum(np.abs(amp) ** 2) * self.grid.dv)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"spectrum is not normalized (sum |g|^2 dv = {norm!r})")
        object.__setattr__(self, "amplitude", _frozen(amp))

    @property
    def density(self) -> np.ndarray:
        """Power spectral density ``|g|^2`` per unit detuning."""
        return np.abs(self.amplitude) ** 2

    @property
    def weights(self) -> np.ndarray:
        """Probability mass per bin, ``|g|^2 dv``; sums to one."""
        return self.density * self.grid.dv


def spectrum_from_samples(grid: SpectralGrid, amplitude) -> Spectrum:
    """Normalize arbitrary (complex) samples of ``g`` into a Spectrum."""
    amp = np.asarray(amplitude, dtype=complex)
    if amp.shape != (grid.n_bins,):
        raise ValueError(f"expected {grid.n_bins} samples, got shape {amp.shape}")
    if not np.all(np.isfinite(amp)):
        raise ValueError("spectrum samples must be finite")
    total = np.sum(np.abs(amp) ** 2) * grid.dv
    if total <= 0:
        raise ValueError("spectrum samples are identically zero")
    amp = amp / np.sqrt(total)
    # second pass absorbs the rounding of the first
    amp = amp / np.sqrt(np.sum(np.abs(amp) ** 2) * grid.dv)
    return Spectrum(grid, amp)


def spectrum_gaussian(grid: SpectralGrid, sigma: float) -> Spectrum:
    """Gaussian power spectrum ``|g|^2 ~ exp(-v^2 / (2 sigma^2))`` with flat phase."""
    if not np.isfinite(sigma) or sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma!r}")
    v = grid.detunings
    return spectrum_from_samples(grid, np.exp(-(v**2) / (4.0 * sigma**2)))


def spectrum_type1(grid: SpectralGrid, curvature: float) -> Spectrum:
    """Degenerate type-I phase-matching spectrum, ``|g|^2 ~ sinc^2(b v^2)``.

    The phase mismatch of a degenerate type-I process is quadratic in the
    detuning, so ``curvature`` (``b``) sets where the first zero falls:
    ``b * v**2 == pi``.
    """
    if not np.isfinite(curvature) or curvature <= 0:
        raise ValueError(f"curvature must be positive, got {curvature!r}")
    x = curvature * grid.detunings**2
    # np.sinc is the normalized sin(pi x)/(pi x)
    return spectrum_from_samples(grid, np.abs(np.sinc(x / np.pi)))


def type1_curvature_for_fwhm(fwhm: float) -> float:
    """Curvature ``b`` whose ``sinc^2(b v^2)`` spectrum has the given full width
    at half maximum, measured across both sides of ``omega0``."""
    from scipy.optimize import brentq

    if not np.isfinite(fwhm) or fwhm <= 0:
        raise ValueError(f"fwhm must be positive, got {fwhm!r}")
    x_half = brentq(lambda x: np.sinc(x / np.pi) ** 2 - 0.5, 0.1, 3.0, xtol=1e-15)
    return x_half / (fwhm / 2.0) ** 2


@dataclass(frozen=True, eq=False)
class PhaseMask:
    """Spectral phase sampled at ``omega0 + v_k`` (upper) and ``omega0 - v_k`` (lower)."""

    grid: SpectralGrid
    phase_upper: np.ndarray
    phase_lower: np.ndarray

    def __post_init__(self):
        for name in ("phase_upper", "phase_lower"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (self.grid.n_bins,):
                raise ValueError(
                    f"{name} needs {self.grid.n_bins} samples, got shape {arr.shape}"
                )
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite phases")
            object.__setattr__(self, name, _frozen(arr))

    def __add__(self, other: "PhaseMask") -> "PhaseMask":
        check_same_grid(self.grid, other.grid)
        return PhaseMask(
            self.grid,
            self.phase_upper + other.phase_upper,
            self.phase_lower + other.phase_lower,
        )

    def __neg__(self) -> "PhaseMask":
        return PhaseMask(self.grid, -self.phase_upper, -self.phase_lower)


def mask_zero(grid: SpectralGrid) -> PhaseMask:
    z = np.zeros(grid.n_bins)
    return PhaseMask(grid, z, z)


def mask_linear(grid: SpectralGrid, slope: float) -> PhaseMask:
    """``theta(omega) = slope * omega``: a pure group delay of ``slope``."""
    return PhaseMask(grid, slope * grid.upper_frequencies, slope * grid.lower_frequencies)


def mask_pi_step(grid: SpectralGrid, step_position: float) -> PhaseMask:
    """Phase ``pi`` for ``omega > omega0 + step_position``, zero otherwise.

    The step frequency itself gets phase zero.
    """
    edge = grid.omega0 + step_position
    return PhaseMask(
        grid,
        np.where(grid.upper_frequencies > edge, np.pi, 0.0),
        np.where(grid.lower_frequencies > edge, np.pi, 0.0),
    )


def mask_custom(grid: SpectralGrid, samples) -> PhaseMask:
    """Mask from caller samples: an ``(n_bins, 2)`` array of (upper, lower) phases,
    or a pair ``(upper, lower)`` of length-``n_bins`` arrays."""
    arr = np.asarray(samples, dtype=float)
    if arr.shape == (grid.n_bins, 2):
        upper, lower = arr[:, 0], arr[:, 1]
    elif arr.shape == (2, grid.n_bins):
        upper, lower = arr
    else:
        raise ValueError(
            f"mask samples must cover {grid.n_bins} bins on both half-spectra, "
            f"got shape {arr.shape}"
        )
    return PhaseMask(grid, upper, lower)


def mask_from_function(grid: SpectralGrid, func) -> PhaseMask:
    """Sample ``func(omega)`` on both half-spectra."""
    return PhaseMask(
        grid,
        np.asarray(func(grid.upper_frequencies), dtype=float),
        np.asarray(func(grid.lower_frequencies), dtype=float),
    )


def theta_xy(mask_x: PhaseMask, mask_y: PhaseMask) -> PhaseMask:
    """Phase difference between the X and Y shaper axes at every frequency."""
    check_same_grid(mask_x.grid, mask_y.grid)
    return PhaseMask(
        mask_x.grid,
        mask_x.phase_upper - mask_y.phase_upper,
        mask_x.phase_lower - mask_y.phase_lower,
    )


def antisymmetric_part(theta: PhaseMask) -> np.ndarray:
    """Odd part about ``omega0``: ``(theta(+v) - theta(-v)) / 2`` per bin."""
    return (theta.phase_upper - theta.phase_lower) / 2.0


def symmetric_part(theta: PhaseMask) -> np.ndarray:
    """Even part about ``omega0``: ``(theta(+v) + theta(-v)) / 2`` per bin."""
    return (theta.phase_upper + theta.phase_lower) / 2.0
