"""Config-driven command line front end.

    spectralbell CONFIG.json [--output DIR] [--seed N] [--quiet]

Exit codes: 0 success, 2 config error, 3 numeric precondition violation,
4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .bell import (
    RECIPES,
    bell_curves,
    cauchy_schwarz,
    fidelity_lower_bound,
    synthesize,
)
from .biphoton import (
    BellLabel,
    bell_state,
    fiber_channel,
    fidelity,
    random_dispersion,
    random_unitary,
)
from .fileio import (
    FileFormatError,
    bell_curves_csv,
    curve_csv,
    parse_custom_mask,
    parse_custom_spectrum,
    table_csv,
    write_text,
)
from .interference import (
    DetectionConfig,
    DetectionMode,
    coincidence_oracle,
    hom_scan,
    step_scan,
    visibility,
)
from .spectral import (
    PhaseMask,
    SpectralGrid,
    make_grid,
    mask_from_function,
    mask_linear,
    mask_pi_step,
    mask_zero,
    spectrum_gaussian,
    spectrum_type1,
)

EXIT_OK, EXIT_CONFIG, EXIT_PRECONDITION, EXIT_IO = 0, 2, 3, 4
SPEED_OF_LIGHT = 299_792_458.0

SCENARIOS = ("hom-scan", "step-scan", "bell", "custom-mask", "dfs-check")

# every default the config may omit; README mirrors this table
DEFAULTS = {
    "units": "normalized",
    "mu": 1.0,
    "seed": 0,
    "hom-scan": {"n_delays": 401},
    "custom-mask": {"n_delays": 401},
    "step-scan": {"n_steps": 401},
    "bell": {"alpha_start_deg": 0.0, "alpha_stop_deg": 180.0, "alpha_step_deg": 5.0},
    "dfs-check": {
        "n_channels": 100,
        "dispersion_order": 5,
        "dispersion_scale": 3.0,
        "state": "psi-",
        "control": "phi+",
    },
}


class ConfigError(ValueError):
    """The scenario config is malformed or incomplete."""


@dataclass
class ScenarioConfig:
    grid: SpectralGrid
    spectrum_spec: dict
    scenario: str
    params: dict
    mu: float = 1.0
    seed: int = 0
    units: str = "normalized"
    output: str = "out.csv"
    base_dir: Path = field(default_factory=Path.cwd)


def _require(section: dict, key: str, where: str):
    if key not in section:
        raise ConfigError(f"missing field '{where}.{key}'")
    return section[key]


def _number(section: dict, key: str, where: str, default=None, kind=float):
    if key not in section:
        if default is None:
            raise ConfigError(f"missing field '{where}.{key}'")
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"field '{where}.{key}' must be a number, got {value!r}")
    if kind is int and int(value) != value:
        raise ConfigError(f"field '{where}.{key}' must be an integer, got {value!r}")
    return kind(value)


def _grid_from(section: dict, units: str) -> SpectralGrid:
    if not isinstance(section, dict):
        raise ConfigError("field 'grid' must be an object")
    n_bins = _number(section, "n_bins", "grid", kind=int)
    if units == "normalized":
        omega0 = _number(section, "omega0", "grid", default=1.0)
        detuning_max = _number(section, "detuning_max", "grid")
    elif units == "physical":
        if "center_wavelength_nm" in section:
            lam = _number(section, "center_wavelength_nm", "grid") * 1e-9
            band = _number(section, "bandwidth_nm", "grid") * 1e-9
            omega0 = 2 * np.pi * SPEED_OF_LIGHT / lam
            # full filter width mapped to angular frequency, split evenly around omega0
            detuning_max = 0.5 * omega0 * band / lam
        else:
            omega0 = _number(section, "omega0", "grid")
            detuning_max = _number(section, "detuning_max", "grid")
    else:
        raise ConfigError(f"field 'units' must be 'normalized' or 'physical', got {units!r}")
    return make_grid(omega0, detuning_max, n_bins)


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(raw, dict):
        raise ConfigError("top-level config must be an object")
    units = raw.get("units", DEFAULTS["units"])
    grid = _grid_from(_require(raw, "grid", "config"), units)
    spectrum_spec = _require(raw, "spectrum", "config")
    if not isinstance(spectrum_spec, dict):
        raise ConfigError("field 'spectrum' must be an object")
    scenario = _require(raw, "scenario", "config")
    if not isinstance(scenario, dict):
        raise ConfigError("field 'scenario' must be an object")
    kind = _require(scenario, "kind", "scenario")
    if kind not in SCENARIOS:
        raise ConfigError(f"field 'scenario.kind' must be one of {SCENARIOS}, got {kind!r}")
    params = dict(DEFAULTS.get(kind, {}))
    params.update({k: v for k, v in scenario.items() if k != "kind"})
    mu = _number(raw, "mu", "config", default=DEFAULTS["mu"])
    seed = _number(raw, "seed", "config", default=DEFAULTS["seed"], kind=int)
    if not 0 <= seed < 2**64:
        raise ConfigError("field 'config.seed' must be an unsigned 64-bit integer")
    output = raw.get("output", f"{kind}.csv")
    return ScenarioConfig(grid, spectrum_spec, kind, params, mu, seed, units, output, path.parent)


def _resolve(cfg: ScenarioConfig, p: str) -> Path:
    p = Path(p)
    return p if p.is_absolute() else cfg.base_dir / p


def build_spectrum(cfg: ScenarioConfig):
    spec = cfg.spectrum_spec
    model = _require(spec, "model", "spectrum")
    if model == "gaussian":
        return spectrum_gaussian(cfg.grid, _number(spec, "sigma", "spectrum"))
    if model == "type1":
        if "first_zero" in spec:
            # curvature placing the first sinc zero at the given detuning
            curvature = np.pi / _number(spec, "first_zero", "spectrum") ** 2
        else:
            curvature = _number(spec, "curvature", "spectrum")
        return spectrum_type1(cfg.grid, curvature)
    if model == "custom":
        return parse_custom_spectrum(_resolve(cfg, _require(spec, "path", "spectrum")), cfg.grid)
    raise ConfigError(f"field 'spectrum.model' must be gaussian, type1 or custom, got {model!r}")


def build_mask(cfg: ScenarioConfig, spec, where: str) -> PhaseMask:
    grid = cfg.grid
    if spec is None:
        return mask_zero(grid)
    if isinstance(spec, str):
        return parse_custom_mask(_resolve(cfg, spec), grid)
    if not isinstance(spec, dict):
        raise ConfigError(f"field '{where}' must be a file path or an object")
    kind = _require(spec, "kind", where)
    if kind == "zero":
        return mask_zero(grid)
    if kind == "linear":
        return mask_linear(grid, _number(spec, "slope", where))
    if kind == "pi-step":
        return mask_pi_step(grid, _number(spec, "position", where, default=0.0))
    if kind == "polynomial":
        coeffs = _require(spec, "coefficients", where)
        if not isinstance(coeffs, list) or not all(
            isinstance(c, (int, float)) and not isinstance(c, bool) for c in coeffs
        ):
            raise ConfigError(f"field '{where}.coefficients' must be a list of numbers")
        c = np.asarray(coeffs, dtype=float)
        return mask_from_function(
            grid,
            lambda w: np.polynomial.polynomial.polyval((w - grid.omega0) / grid.detuning_max, c),
        )
    if kind == "file":
        return parse_custom_mask(_resolve(cfg, _require(spec, "path", where)), grid)
    raise ConfigError(f"field '{where}.kind' has unknown mask kind {kind!r}")


def _linspace(params: dict, lo: str, hi: str, n: str, where: str) -> np.ndarray:
    count = _number(params, n, where, kind=int)
    if count < 1:
        raise ConfigError(f"field '{where}.{n}' must be at least 1")
    return np.linspace(_number(params, lo, where), _number(params, hi, where), count)


def _alphas(params: dict) -> np.ndarray:
    start = _number(params, "alpha_start_deg", "scenario")
    stop = _number(params, "alpha_stop_deg", "scenario")
    step = _number(params, "alpha_step_deg", "scenario")
    if step <= 0:
        raise ConfigError("field 'scenario.alpha_step_deg' must be positive")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return np.deg2rad(start + step * np.arange(n))


def _base_metadata(cfg: ScenarioConfig) -> dict:
    return {
        "scenario": cfg.scenario,
        "units": cfg.units,
        "omega0": cfg.grid.omega0,
        "detuning_max": cfg.grid.detuning_max,
        "n_bins": cfg.grid.n_bins,
        "spectrum": cfg.spectrum_spec,
        "mu": cfg.mu,
        "seed": cfg.seed,
        "kernel_backend": kernels.BACKEND,
    }


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _run_hom(cfg: ScenarioConfig, spectrum, require_masks: bool):
    p = cfg.params
    delays = _linspace(p, "delay_min", "delay_max", "n_delays", "scenario")
    if require_masks:
        mx = build_mask(cfg, _require(p, "mask_x", "scenario"), "scenario.mask_x")
        my = build_mask(cfg, _require(p, "mask_y", "scenario"), "scenario.mask_y")
    else:
        mx = build_mask(cfg, p.get("mask_x"), "scenario.mask_x")
        my = build_mask(cfg, p.get("mask_y"), "scenario.mask_y")
    curve = hom_scan(spectrum, delays, mx, my, cfg.mu)
    meta = _base_metadata(cfg)
    meta.update(curve.metadata)
    meta["masks"] = {"x": p.get("mask_x"), "y": p.get("mask_y")}
    i_min, i_max = int(np.argmin(curve.rates)), int(np.argmax(curve.rates))
    summary = (
        f"{cfg.scenario}: min_rate={curve.rates[i_min]:.3e} at delay={delays[i_min]:.6g}, "
        f"max_rate={curve.rates[i_max]:.6f} at delay={delays[i_max]:.6g}, "
        f"visibility={_fmt(visibility(curve))}"
    )
    return curve_csv(type(curve)(curve.parameter_name, curve.parameter_values, curve.rates,
                                 curve.normalization, meta)), summary


def _run_step(cfg: ScenarioConfig, spectrum):
    positions = _linspace(cfg.params, "step_min", "step_max", "n_steps", "scenario")
    curve = step_scan(spectrum, positions, cfg.mu)
    meta = _base_metadata(cfg)
    meta.update(curve.metadata)
    i_max = int(np.argmax(curve.rates))
    summary = (
        f"step-scan: peak_rate={curve.rates[i_max]:.6f} at offset={positions[i_max]:.6g}, "
        f"min_rate={curve.rates.min():.3e}"
    )
    return curve_csv(type(curve)(curve.parameter_name, curve.parameter_values, curve.rates,
                                 curve.normalization, meta)), summary


def _label(params: dict, key: str) -> BellLabel:
    try:
        return BellLabel.parse(_require(params, key, "scenario"))
    except ValueError as exc:
        raise ConfigError(f"field 'scenario.{key}': {exc}") from None


def _run_bell(cfg: ScenarioConfig, spectrum):
    p = cfg.params
    label = _label(p, "recipe")
    recipe = RECIPES[label]
    state = synthesize(recipe, spectrum)
    alphas = _alphas(p)
    curves = bell_curves(state, alphas, cfg.mu, label)
    f = fidelity(state, label, spectrum)
    # first angle of maximal orthogonal rate; flat curves resolve to the first grid point
    i_star = int(np.flatnonzero(curves.r_orth >= curves.r_orth.max() - 1e-12)[0])
    alpha_star = float(alphas[i_star])
    cs = cauchy_schwarz(curves, alpha_star)
    parts = [f"bell {label.name}: fidelity={_fmt(f)}"]
    try:
        f_lb = fidelity_lower_bound(curves, curves, label)
        parts.append(f"fidelity_lower_bound={_fmt(f_lb)}")
    except ValueError:
        pass
    for name, value in zip(("v_same", "v_orth"), _safe_visibilities(curves)):
        parts.append(f"{name}={value}")
    verdict = "violated" if cs.violated else "not violated"
    parts.append(
        f"cauchy_schwarz at alpha={np.rad2deg(alpha_star):.6g}deg: "
        f"lhs={cs.lhs:.6e} rhs={cs.rhs:.6e} {verdict}"
    )
    meta = _base_metadata(cfg)
    meta["recipe"] = {"beta": recipe.beta, "step_on_one_slm": recipe.step_on_one_slm,
                      "target": label.name}
    return bell_curves_csv(curves, meta), ", ".join(parts)


def _safe_visibilities(curves):
    out = []
    for values in (curves.r_same, curves.r_orth):
        hi, lo = float(values.max()), float(values.min())
        out.append("undefined" if hi <= 1e-12 else _fmt((hi - lo) / (hi + lo)))
    return out


def _run_dfs(cfg: ScenarioConfig, spectrum):
    p = cfg.params
    n = _number(p, "n_channels", "scenario", kind=int)
    order = _number(p, "dispersion_order", "scenario", kind=int)
    scale = _number(p, "dispersion_scale", "scenario")
    if n < 1 or order < 0:
        raise ConfigError("field 'scenario.n_channels' must be >= 1 and 'dispersion_order' >= 0")
    label = _label(p, "state")
    control = _label(p, "control")
    rng = np.random.default_rng(cfg.seed)
    state = bell_state(label, spectrum)
    ctrl = bell_state(control, spectrum)
    alphas = _alphas({**DEFAULTS["bell"], **p})
    fids, ctrl_fids, same_max = [], [], []
    for _ in range(n):
        u = random_unitary(rng)
        phase = random_dispersion(cfg.grid, rng, order, scale)
        out = fiber_channel(state, phase, u)
        fids.append(fidelity(out, label))
        ctrl_fids.append(fidelity(fiber_channel(ctrl, phase, u), control))
        same_max.append(max(coincidence_oracle(out, DetectionConfig(a, DetectionMode.SAME))
                            for a in alphas))
    meta = _base_metadata(cfg)
    meta.update({"state": label.name, "control": control.name,
                 "dispersion_order": order, "dispersion_scale": scale})
    text = table_csv(
        {"parameter": np.arange(n), "fidelity": fids, "max_r_same": same_max,
         "control_fidelity": ctrl_fids},
        {**meta, "parameter_name": "channel"},
    )
    degraded = int(np.sum(np.asarray(ctrl_fids) < 0.99))
    summary = (
        f"dfs-check {label.name}: min_fidelity={_fmt(min(fids))}, "
        f"max_r_same={max(same_max):.3e}; control {control.name}: "
        f"{degraded}/{n} channels with fidelity < 0.99"
    )
    return text, summary


def run(cfg: ScenarioConfig, output_dir=None) -> tuple[Path, str]:
    """Run one scenario, write its CSV and return ``(csv_path, summary_line)``."""
    spectrum = build_spectrum(cfg)
    if cfg.scenario == "hom-scan":
        text, summary = _run_hom(cfg, spectrum, require_masks=False)
    elif cfg.scenario == "custom-mask":
        text, summary = _run_hom(cfg, spectrum, require_masks=True)
    elif cfg.scenario == "step-scan":
        text, summary = _run_step(cfg, spectrum)
    elif cfg.scenario == "bell":
        text, summary = _run_bell(cfg, spectrum)
    else:
        text, summary = _run_dfs(cfg, spectrum)
    out = Path(output_dir) if output_dir is not None else Path.cwd()
    path = out / cfg.output
    write_text(path, text)
    return path, summary


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectralbell",
        description="Shaped two-photon interference and Bell-state synthesis scenarios.",
    )
    parser.add_argument("config", help="scenario config file (JSON)")
    parser.add_argument("--output", default=".", help="directory for CSV output")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--quiet", action="store_true", help="suppress the summary line")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise ConfigError("--seed must be an unsigned 64-bit integer")
            cfg.seed = args.seed
        path, summary = run(cfg, args.output)
    except (ConfigError, FileFormatError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    if not args.quiet:
        print(summary)
        print(f"wrote {path}")
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
