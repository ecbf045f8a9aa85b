"""Bell-state synthesis recipes and the polarization-analysis measurements.

Rates follow the normalization of :mod:`spectralbell.interference`: pairs
split at random between the PBS ports give an orthogonal-mode rate of 1.
Same-polarization rates include the factor 1/2 of the polarizer + wave
plate detection path, so they are numerically equal to the probability
that both photons are found along ``alpha``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .biphoton import BellLabel, BiphotonState, apply_shaper, source_state
from .interference import DetectionConfig, DetectionMode, coincidence_oracle
from .spectral import Spectrum, mask_pi_step, mask_zero

__all__ = [
    "BellRecipe",
    "RECIPES",
    "BellCurves",
    "CauchySchwarz",
    "synthesize",
    "bell_curves",
    "default_alphas",
    "curve_visibilities",
    "correlation",
    "fidelity_lower_bound",
    "cauchy_schwarz",
]


@dataclass(frozen=True)
class BellRecipe:
    beta: float
    step_on_one_slm: bool
    target: BellLabel


RECIPES = {
    BellLabel.PHI_MINUS: BellRecipe(np.pi, False, BellLabel.PHI_MINUS),
    BellLabel.PHI_PLUS: BellRecipe(0.0, False, BellLabel.PHI_PLUS),
    BellLabel.PSI_MINUS: BellRecipe(np.pi, True, BellLabel.PSI_MINUS),
    BellLabel.PSI_PLUS: BellRecipe(0.0, True, BellLabel.PSI_PLUS),
}

# signs of the H/V and diagonal correlations <ZZ>, <XX> for each target
_CORRELATION_SIGNS = {
    BellLabel.PHI_PLUS: (1.0, 1.0),
    BellLabel.PHI_MINUS: (1.0, -1.0),
    BellLabel.PSI_PLUS: (-1.0, 1.0),
    BellLabel.PSI_MINUS: (-1.0, -1.0),
}

_ANGLE_TOL = 1e-9


def synthesize(recipe: BellRecipe, spectrum: Spectrum) -> BiphotonState:
    """Set the source relative phase ``beta``, then optionally put a pi step at
    ``omega0`` on the X shaper axis."""
    state = source_state(spectrum, recipe.beta)
    if recipe.step_on_one_slm:
        grid = spectrum.grid
        state = apply_shaper(state, mask_pi_step(grid, 0.0), mask_zero(grid))
    return state


def default_alphas() -> np.ndarray:
    """0 to 180 degrees in 5 degree steps, in radians."""
    return np.deg2rad(np.arange(0, 181, 5, dtype=float))


@dataclass(frozen=True, eq=False)
class BellCurves:
    alphas: np.ndarray
    r_orth: np.ndarray
    r_same: np.ndarray
    state_label: BellLabel | None = None
    mu: float = 1.0

    def __post_init__(self):
        arrs = [np.asarray(a, dtype=float) for a in (self.alphas, self.r_orth, self.r_same)]
        if len({a.shape for a in arrs}) != 1 or arrs[0].ndim != 1:
            raise ValueError("alphas, r_orth and r_same must be 1-D arrays of equal length")
        if np.any(arrs[1] < -1e-12) or np.any(arrs[2] < -1e-12):
            raise ValueError("rates must be non-negative")
        for name, a in zip(("alphas", "r_orth", "r_same"), arrs):
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    def _index(self, alpha: float) -> int:
        # polarization angles are defined modulo pi
        diff = np.angle(np.exp(2j * (self.alphas - alpha))) / 2.0
        hits = np.flatnonzero(np.abs(diff) < _ANGLE_TOL)
        if hits.size == 0:
            raise ValueError(f"angle {np.rad2deg(alpha):.6g} deg is not on the curve grid")
        return int(hits[0])

    def orth_at(self, alpha: float) -> float:
        return float(self.r_orth[self._index(alpha)])

    def same_at(self, alpha: float) -> float:
        return float(self.r_same[self._index(alpha)])


def bell_curves(state: BiphotonState, alphas=None, mu: float = 1.0,
                label: BellLabel | None = None) -> BellCurves:
    """R(alpha, alpha-perp) and R(alpha, alpha) against the analyzer angle."""
    alphas = default_alphas() if alphas is None else np.asarray(alphas, dtype=float)
    r_orth = [coincidence_oracle(state, DetectionConfig(a, DetectionMode.ORTHOGONAL, mu=mu))
              for a in alphas]
    r_same = [coincidence_oracle(state, DetectionConfig(a, DetectionMode.SAME, mu=mu))
              for a in alphas]
    return BellCurves(alphas, np.array(r_orth), np.array(r_same), label, mu)


def _fringe_visibility(values: np.ndarray, name: str) -> float:
    if values.size == 0:
        raise ValueError(f"{name} curve is empty")
    hi, lo = float(values.max()), float(values.min())
    if hi <= 1e-12:
        raise ValueError(f"{name} curve is identically zero; visibility undefined")
    return (hi - lo) / (hi + lo)


def curve_visibilities(curves: BellCurves) -> tuple[float, float]:
    """Fringe visibilities ``(max - min) / (max + min)`` of the same- and
    orthogonal-polarization curves, in that order."""
    return (_fringe_visibility(curves.r_same, "r_same"),
            _fringe_visibility(curves.r_orth, "r_orth"))


def correlation(curves: BellCurves, alpha: float) -> float:
    """Polarization correlation along the analyzer axis ``alpha``:
    (P(same) - P(opposite)) / (P(same) + P(opposite))."""
    same = curves.same_at(alpha) + curves.same_at(alpha + np.pi / 2)
    # r_orth counts both mixed orderings at twice the probability scale of r_same
    opposite = curves.orth_at(alpha) / 2.0
    total = same + opposite
    if total <= 0:
        raise ValueError("no coincidences at this analyzer angle")
    return (same - opposite) / total


def fidelity_lower_bound(curves_hv_basis: BellCurves, curves_diag_basis: BellCurves,
                         target: BellLabel | None = None) -> float:
    """Two-basis witness bound on the fidelity with a Bell state.

    Uses the H/V correlation (analyzer at 0) from the first curve set and the
    diagonal correlation (analyzer at 45 deg) from the second.  For phi+ the
    operator ``(ZZ + XX)/2`` never exceeds the projector onto phi+, so
    ``F >= (E_hv + E_diag)/2``; the other Bell states follow by flipping the
    signs of the correlations they anti-correlate in.
    """
    a, b = curves_hv_basis.alphas, curves_diag_basis.alphas
    if a.shape != b.shape or not np.allclose(a, b, rtol=0.0, atol=_ANGLE_TOL):
        raise ValueError("the two curve sets must share one analyzer-angle grid")
    target = target or curves_hv_basis.state_label or curves_diag_basis.state_label
    if target is None:
        raise ValueError("no target Bell state given")
    s_hv, s_diag = _CORRELATION_SIGNS[target]
    e_hv = correlation(curves_hv_basis, 0.0)
    e_diag = correlation(curves_diag_basis, np.pi / 4)
    return float((s_hv * e_hv + s_diag * e_diag) / 2.0)


class CauchySchwarz(NamedTuple):
    lhs: float
    rhs: float
    violated: bool


def cauchy_schwarz(curves: BellCurves, alpha: float) -> CauchySchwarz:
    """Classical bound R(a,a) R(a-perp,a-perp) >= R(a,a-perp)^2 at one angle."""
    lhs = curves.same_at(alpha) * curves.same_at(alpha + np.pi / 2)
    rhs = curves.orth_at(alpha) ** 2
    return CauchySchwarz(lhs, rhs, bool(lhs < rhs))
