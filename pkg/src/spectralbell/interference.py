"""Coincidence rates behind the polarizing beam splitter, and the scans built on them.

Rates are normalized so that randomly split (non-interfering) pairs give
exactly 1: the large-delay plateau of a HOM scan.  Two independent routes
are provided:

* :func:`coincidence_closed_form` evaluates the shaped-HOM integral directly
  from ``|g|^2`` and the X-Y phase difference.
* :func:`coincidence_oracle` propagates a full :class:`BiphotonState` through
  the analyzer optics and sums detection probabilities, never using the
  integral formula.

Partial distinguishability enters both through ``mu``: the pure-state rate
is mixed with the rate of polarization-unpolarized pairs carrying the same
spectral weights, which scales every interference term by ``mu``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import kernels
from .biphoton import BiphotonState, hwp_matrix, polarizer_matrix
from .spectral import (
    PhaseMask,
    Spectrum,
    antisymmetric_part,
    check_same_grid,
    mask_pi_step,
    mask_zero,
    theta_xy,
)

__all__ = [
    "DetectionMode",
    "DetectionConfig",
    "ScanCurve",
    "ZeroCertificate",
    "coincidence_closed_form",
    "coincidence_oracle",
    "phase_asymmetry",
    "hom_scan",
    "step_scan",
    "power_spectrum_from_step_scan",
    "visibility",
    "zero_coincidence_certificate",
    "DELAY_CONVENTION",
]

DELAY_CONVENTION = "theta_X = +tau*omega/2, theta_Y = -tau*omega/2 (theta_X - theta_Y = tau*omega)"
# rates may dip below zero by accumulated roundoff only
_RATE_FLOOR = -1e-12


class DetectionMode(enum.Enum):
    ORTHOGONAL = "orthogonal"
    SAME = "same"


@dataclass(frozen=True)
class DetectionConfig:
    """Analyzer setting.

    ``alpha`` rotates the analysis axes away from H/V.  In ``SAME`` mode a
    polarizer at ``alpha`` is followed by a half-wave plate turning ``alpha``
    into X, so the PBS splits the surviving pairs at random and only half of
    them are registered.  ``coincidence_window`` is informational: the rates
    assume it is much longer than the biphoton correlation time.
    """

    alpha: float = 0.0
    mode: DetectionMode = DetectionMode.ORTHOGONAL
    coincidence_window: float | None = None
    mu: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.alpha):
            raise ValueError(f"alpha must be finite, got {self.alpha!r}")
        if not (0.0 <= self.mu <= 1.0):
            raise ValueError(f"mu must lie in [0, 1], got {self.mu!r}")
        if not isinstance(self.mode, DetectionMode):
            object.__setattr__(self, "mode", DetectionMode(self.mode))


@dataclass(frozen=True, eq=False)
class ScanCurve:
    parameter_name: str
    parameter_values: np.ndarray
    rates: np.ndarray
    normalization: float = 1.0
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        x = np.asarray(self.parameter_values, dtype=float)
        r = np.asarray(self.rates, dtype=float)
        if x.shape != r.shape or x.ndim != 1:
            raise ValueError("parameter_values and rates must be 1-D arrays of equal length")
        if not (np.all(np.isfinite(r)) and np.all(r >= _RATE_FLOOR)):
            raise ValueError("rates must be finite and non-negative")
        x.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "parameter_values", x)
        object.__setattr__(self, "rates", r)


def _check_mu(mu: float) -> float:
    if not (0.0 <= mu <= 1.0):
        raise ValueError(f"mu must lie in [0, 1], got {mu!r}")
    return float(mu)


def phase_asymmetry(theta: PhaseMask) -> np.ndarray:
    """``Theta(+v) - Theta(-v)`` per bin: the only part of the X-Y phase the
    coincidences can see."""
    return 2.0 * antisymmetric_part(theta)


def coincidence_closed_form(spectrum: Spectrum, theta: PhaseMask, mu: float = 1.0) -> float:
    """``1 - mu * sum_k |g_k|^2 cos(Theta(+v_k) - Theta(-v_k)) dv``.

    The one-sided integral of ``|g|^2 e^{i dTheta}`` is paired with its
    mirror image at negative detuning, which is its complex conjugate, so
    the bilateral sum is the real cosine sum used here.
    """
    check_same_grid(spectrum.grid, theta.grid)
    mu = _check_mu(mu)
    return float(
        kernels.hom_rates(
            spectrum.weights, spectrum.grid.detunings, phase_asymmetry(theta), np.zeros(1), mu
        )[0]
    )


def _orth_rate(amplitude, jones, dv):
    m = np.broadcast_to(jones, (amplitude.shape[0], 2, 2))
    return 2.0 * kernels.orth_probability(amplitude, m, m, dv)


def coincidence_oracle(state: BiphotonState, config: DetectionConfig) -> float:
    """Brute-force coincidence rate of ``state`` for the given analyzer.

    The frequency-resolved detection outcomes (which detector sees
    ``omega0 + v`` and which ``omega0 - v``) are distinguishable for a long
    coincidence window, so their probabilities add; within each outcome the
    amplitudes of all polarization paths leading to it add coherently, which
    is what the per-bin Jones transforms do.
    """
    dv = state.grid.dv
    amp = state.amplitude
    if config.mode is DetectionMode.ORTHOGONAL:
        optics = hwp_matrix(config.alpha / 2.0)
        unpolarized = 1.0
    else:
        optics = hwp_matrix((config.alpha + np.pi / 4.0) / 2.0) @ polarizer_matrix(config.alpha)
        # P(both alpha) = 1/4 for unpolarized pairs, half of those registered
        unpolarized = 0.25
    pure = _orth_rate(amp, optics, dv)
    if config.mu == 1.0:
        return pure
    total = float(np.sum(state.bin_weights))
    return config.mu * pure + (1.0 - config.mu) * unpolarized * total


def hom_scan(spectrum: Spectrum, delays, extra_mask_x: PhaseMask | None = None,
             extra_mask_y: PhaseMask | None = None, mu: float = 1.0) -> ScanCurve:
    """Coincidence rate against the X-Y relative delay, on top of optional
    extra shaper masks."""
    grid = spectrum.grid
    mu = _check_mu(mu)
    delays = np.asarray(delays, dtype=float)
    if delays.ndim != 1 or not np.all(np.isfinite(delays)):
        raise ValueError("delays must be a finite 1-D array")
    mx = extra_mask_x if extra_mask_x is not None else mask_zero(grid)
    my = extra_mask_y if extra_mask_y is not None else mask_zero(grid)
    check_same_grid(grid, mx.grid, my.grid)
    dphase = phase_asymmetry(theta_xy(mx, my))
    rates = kernels.hom_rates(spectrum.weights, grid.detunings, dphase, delays, mu)
    return ScanCurve(
        "delay",
        delays,
        rates,
        normalization=1.0,
        metadata={"scan": "hom", "delay_convention": DELAY_CONVENTION, "mu": mu},
    )


def step_scan(spectrum: Spectrum, step_positions, mu: float = 1.0) -> ScanCurve:
    """Zero-delay coincidence rate as a pi step on the X SLM is swept across
    the spectrum; positions are offsets from ``omega0``."""
    grid = spectrum.grid
    mu = _check_mu(mu)
    positions = np.asarray(step_positions, dtype=float)
    if positions.ndim != 1 or not np.all(np.isfinite(positions)):
        raise ValueError("step positions must be a finite 1-D array")
    zero = mask_zero(grid)
    rates = np.array(
        [coincidence_closed_form(spectrum, theta_xy(mask_pi_step(grid, d), zero), mu)
         for d in positions]
    )
    return ScanCurve(
        "step_offset", positions, rates, normalization=1.0,
        metadata={"scan": "pi-step", "mu": mu},
    )


def power_spectrum_from_step_scan(curve: ScanCurve, mu: float = 1.0):
    """Recover ``|g(delta)|^2`` as ``|dR/d delta| / (2 mu)`` from a step scan."""
    if mu <= 0:
        raise ValueError("mu must be positive to invert a step scan")
    x = curve.parameter_values
    if x.size < 3:
        raise ValueError("need at least three step positions")
    return x, np.abs(np.gradient(curve.rates, x)) / (2.0 * mu)


def visibility(curve: ScanCurve) -> float:
    """Dip depth (or peak height) relative to the curve's plateau."""
    if curve.rates.size == 0:
        raise ValueError("empty curve")
    plateau = curve.normalization
    if not plateau > 0:
        raise ValueError(f"visibility needs a positive plateau, got {plateau!r}")
    dip = plateau - curve.rates.min()
    peak = curve.rates.max() - plateau
    return float(max(dip, peak, 0.0) / plateau)


class ZeroCertificate(NamedTuple):
    exists: bool
    delay: float | None
    residual: float


def zero_coincidence_certificate(spectrum: Spectrum, theta: PhaseMask,
                                 tol: float = 1e-9) -> ZeroCertificate:
    """Decide whether some delay cancels the phase asymmetry completely.

    The coincidence rate can reach zero only if the antisymmetric part of
    ``theta`` is linear in detuning (modulo pi per bin).  ``delay`` is the
    slope ``tau`` of that linear part, i.e. ``theta`` acts like an X-Y delay
    ``tau`` and a delay ``-tau`` applied on top brings the rate to zero.
    Bins carrying no spectral weight are ignored.
    """
    check_same_grid(spectrum.grid, theta.grid)
    live = spectrum.weights > 0
    v = spectrum.grid.detunings[live]
    a = antisymmetric_part(theta)[live]
    # a is only defined modulo pi; remove pi-jumps before fitting
    a = np.unwrap(a, period=np.pi)
    design = np.column_stack([np.ones_like(v), v])
    (offset, slope), *_ = np.linalg.lstsq(design, a, rcond=None)
    resid = a - (offset + slope * v)
    offset_wrapped = offset - np.pi * np.round(offset / np.pi)
    residual = float(max(np.max(np.abs(resid)), abs(offset_wrapped)))
    if residual > tol:
        return ZeroCertificate(False, None, residual)
    delay = float(slope)
    rate = float(
        kernels.hom_rates(spectrum.weights, spectrum.grid.detunings,
                          phase_asymmetry(theta), np.array([-delay]), 1.0)[0]
    )
    if rate >= 1e-9:
        raise RuntimeError(f"linear phase asymmetry found but rate at delay {-delay} is {rate}")
    return ZeroCertificate(True, delay, residual)
