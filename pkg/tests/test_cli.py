import json
from pathlib import Path

import numpy as np
import pytest

from spectralbell.cli import DEFAULTS, EXIT_CONFIG, EXIT_IO, EXIT_OK, EXIT_PRECONDITION, main
from spectralbell.fileio import FileFormatError, parse_custom_mask, parse_custom_spectrum
from spectralbell.spectral import make_grid

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
SMALL = {"omega0": 10.0, "detuning_max": 1.0, "n_bins": 64}
GAUSS = {"model": "gaussian", "sigma": 0.125}


def write_config(tmp_path, scenario, **extra):
    cfg = {"grid": SMALL, "spectrum": GAUSS, "scenario": scenario, "output": "out.csv", **extra}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return path


def read_csv(path):
    lines = Path(path).read_text().splitlines()
    meta = {}
    body = []
    for ln in lines:
        if ln.startswith("# "):
            k, v = ln[2:].split(" = ", 1)
            meta[k] = json.loads(v)
        else:
            body.append(ln)
    header = body[0].split(",")
    data = np.array([[float(x) for x in ln.split(",")] for ln in body[1:]])
    return meta, header, data


def test_hom_scan_dip(tmp_path, capsys):
    cfg = write_config(tmp_path, {"kind": "hom-scan", "delay_min": -20, "delay_max": 20, "n_delays": 81})
    assert main([str(cfg), "--output", str(tmp_path)]) == EXIT_OK
    meta, header, data = read_csv(tmp_path / "out.csv")
    assert header == ["parameter", "rate"]
    i0 = np.argmin(np.abs(data[:, 0]))
    assert data[i0, 0] == 0.0
    assert data[:, 1].min() < 1e-9 and np.argmin(data[:, 1]) == i0
    assert meta["scenario"] == "hom-scan" and meta["seed"] == 0
    out = capsys.readouterr().out
    assert "min_rate=" in out and "visibility=1.000000" in out


def test_bell_singlet_summary(tmp_path, capsys):
    cfg = write_config(tmp_path, {"kind": "bell", "recipe": "psi-"})
    assert main([str(cfg), "--output", str(tmp_path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "fidelity=1.000000" in out
    assert " violated" in out and "not violated" not in out
    meta, header, data = read_csv(tmp_path / "out.csv")
    assert header == ["parameter", "r_orth", "r_same"]
    assert len(data) == 37
    assert np.all(np.abs(data[:, 2]) < 1e-10)


def test_bell_phi_plus_not_violated(tmp_path, capsys):
    cfg = write_config(tmp_path, {"kind": "bell", "recipe": "phi+"})
    assert main([str(cfg), "--output", str(tmp_path)]) == EXIT_OK
    assert "not violated" in capsys.readouterr().out


def test_dfs_check(tmp_path, capsys):
    cfg = write_config(tmp_path, {"kind": "dfs-check", "n_channels": 10}, seed=3)
    assert main([str(cfg), "--output", str(tmp_path)]) == EXIT_OK
    meta, header, data = read_csv(tmp_path / "out.csv")
    assert header == ["parameter", "fidelity", "max_r_same", "control_fidelity"]
    assert np.all(np.abs(data[:, 1] - 1) < 1e-10)
    assert np.all(data[:, 2] <= 1e-10)
    assert meta["seed"] == 3
    out = capsys.readouterr().out
    max_r_same = float(out.split("max_r_same=")[1].split(";")[0])
    assert max_r_same <= 1e-10


def test_seed_override_changes_dfs_output(tmp_path):
    cfg = write_config(tmp_path, {"kind": "dfs-check", "n_channels": 4})
    a, b = tmp_path / "a", tmp_path / "b"
    main([str(cfg), "--output", str(a), "--quiet"])
    main([str(cfg), "--output", str(b), "--quiet", "--seed", "11"])
    ta, tb = (a / "out.csv").read_text(), (b / "out.csv").read_text()
    assert ta != tb
    assert "# seed = 11" in tb


def test_quiet(tmp_path, capsys):
    cfg = write_config(tmp_path, {"kind": "step-scan", "step_min": -1, "step_max": 1, "n_steps": 11})
    assert main([str(cfg), "--output", str(tmp_path), "--quiet"]) == EXIT_OK
    assert capsys.readouterr().out == ""


def test_csv_format(tmp_path):
    cfg = write_config(tmp_path, {"kind": "step-scan", "step_min": -1, "step_max": 1, "n_steps": 5})
    main([str(cfg), "--output", str(tmp_path), "--quiet"])
    raw = (tmp_path / "out.csv").read_bytes()
    assert b"\r" not in raw and raw.endswith(b"\n")
    row = raw.decode().splitlines()[-1]
    for field in row.split(","):
        mantissa, exponent = field.split("e")
        assert len(mantissa.lstrip("-").replace(".", "")) == 12


def test_deterministic(tmp_path):
    cfg = write_config(tmp_path, {"kind": "dfs-check", "n_channels": 5}, seed=99)
    main([str(cfg), "--output", str(tmp_path / "1"), "--quiet"])
    main([str(cfg), "--output", str(tmp_path / "2"), "--quiet"])
    assert (tmp_path / "1/out.csv").read_bytes() == (tmp_path / "2/out.csv").read_bytes()


def test_custom_mask_requires_both_masks(tmp_path, capsys):
    cfg = write_config(tmp_path, {"kind": "custom-mask", "delay_min": -1, "delay_max": 1,
                                  "n_delays": 3, "mask_x": {"kind": "zero"}})
    assert main([str(cfg)]) == EXIT_CONFIG
    assert "scenario.mask_y" in capsys.readouterr().err


@pytest.mark.parametrize(
    "mutate,field",
    [
        (lambda c: c.pop("grid"), "config.grid"),
        (lambda c: c["grid"].pop("n_bins"), "grid.n_bins"),
        (lambda c: c["spectrum"].update(model="lorentzian"), "spectrum.model"),
        (lambda c: c["scenario"].update(kind="nope"), "scenario.kind"),
        (lambda c: c["scenario"].update(n_delays="many"), "scenario.n_delays"),
        (lambda c: c.update(units="imperial"), "units"),
        (lambda c: c.update(seed=-1), "config.seed"),
    ],
)
def test_config_errors_name_the_field(tmp_path, capsys, mutate, field):
    cfg = {"grid": dict(SMALL), "spectrum": dict(GAUSS),
           "scenario": {"kind": "hom-scan", "delay_min": -1, "delay_max": 1}}
    mutate(cfg)
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg))
    assert main([str(path)]) == EXIT_CONFIG
    assert field in capsys.readouterr().err


def test_invalid_json(tmp_path):
    path = tmp_path / "c.json"
    path.write_text("{not json")
    assert main([str(path)]) == EXIT_CONFIG


@pytest.mark.parametrize(
    "change",
    [
        {"spectrum": {"model": "gaussian", "sigma": -1.0}},
        {"grid": {"omega0": 0.5, "detuning_max": 1.0, "n_bins": 64}},
        {"mu": 1.5},
    ],
)
def test_precondition_errors(tmp_path, change):
    cfg = {"grid": SMALL, "spectrum": GAUSS,
           "scenario": {"kind": "hom-scan", "delay_min": -1, "delay_max": 1}, **change}
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg))
    assert main([str(path), "--output", str(tmp_path)]) == EXIT_PRECONDITION


def test_missing_config_is_io_error(tmp_path):
    assert main([str(tmp_path / "absent.json")]) == EXIT_IO


def test_missing_mask_file_is_io_error(tmp_path):
    cfg = write_config(tmp_path, {"kind": "custom-mask", "delay_min": -1, "delay_max": 1,
                                  "n_delays": 3, "mask_x": "nowhere.txt", "mask_y": {"kind": "zero"}})
    assert main([str(cfg)]) == EXIT_IO


def test_unwritable_output_is_io_error(tmp_path):
    cfg = write_config(tmp_path, {"kind": "step-scan", "step_min": -1, "step_max": 1, "n_steps": 3})
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main([str(cfg), "--output", str(blocker), "--quiet"]) == EXIT_IO


def _mask_file(path, rows, header=True):
    text = "# upper lower\n\n" if header else ""
    path.write_text(text + "".join(f"{a} {b}\n" for a, b in rows))
    return path


def test_parse_mask_roundtrip(tmp_path):
    grid = make_grid(**SMALL)
    rows = [(0.1 * k, -0.2 * k) for k in range(64)]
    m = parse_custom_mask(_mask_file(tmp_path / "m.txt", rows), grid)
    np.testing.assert_array_equal(m.phase_upper, [r[0] for r in rows])
    np.testing.assert_array_equal(m.phase_lower, [r[1] for r in rows])


def test_parse_mask_missing_line(tmp_path):
    grid = make_grid(**SMALL)
    path = _mask_file(tmp_path / "m.txt", [(0, 0)] * 63)
    with pytest.raises(FileFormatError, match="expected 64 data rows, found 63"):
        parse_custom_mask(path, grid)


def test_parse_mask_nan_names_row(tmp_path):
    grid = make_grid(**SMALL)
    rows = [(0, 0)] * 64
    rows[9] = ("NaN", 0)
    path = _mask_file(tmp_path / "m.txt", rows)
    with pytest.raises(FileFormatError, match="data row 10"):
        parse_custom_mask(path, grid)


@pytest.mark.parametrize("bad", ["1 2 3", "1", "1 x"])
def test_parse_mask_malformed_line(tmp_path, bad):
    grid = make_grid(**SMALL)
    path = tmp_path / "m.txt"
    path.write_text("# c\n" + "0 0\n" * 5 + bad + "\n" + "0 0\n" * 58)
    with pytest.raises(FileFormatError, match=":7:"):
        parse_custom_mask(path, grid)


def test_parse_spectrum_normalizes(tmp_path):
    grid = make_grid(**SMALL)
    path = _mask_file(tmp_path / "s.txt", [(1.0, 1.0)] * 64)
    s = parse_custom_spectrum(path, grid)
    assert np.sum(s.weights) == pytest.approx(1.0, abs=1e-14)
    np.testing.assert_allclose(np.angle(s.amplitude), np.pi / 4)


def test_mask_file_error_exit_code(tmp_path):
    _mask_file(tmp_path / "short.txt", [(0, 0)] * 10)
    cfg = write_config(tmp_path, {"kind": "custom-mask", "delay_min": -1, "delay_max": 1,
                                  "n_delays": 3, "mask_x": "short.txt", "mask_y": {"kind": "zero"}})
    assert main([str(cfg)]) == EXIT_CONFIG


def test_physical_units_grid(tmp_path):
    cfg = {"units": "physical",
           "grid": {"center_wavelength_nm": 728.0, "bandwidth_nm": 70.0, "n_bins": 32},
           "spectrum": {"model": "gaussian", "sigma": 2e13},
           "scenario": {"kind": "hom-scan", "delay_min": -1e-13, "delay_max": 1e-13, "n_delays": 5},
           "output": "p.csv"}
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg))
    assert main([str(path), "--output", str(tmp_path), "--quiet"]) == EXIT_OK
    meta, _, data = read_csv(tmp_path / "p.csv")
    omega0 = 2 * np.pi * 299_792_458.0 / 728e-9
    assert meta["omega0"] == pytest.approx(omega0, rel=1e-12)
    # 70 nm full band around 728 nm maps to about 1.24e14 rad/s of detuning
    assert meta["detuning_max"] == pytest.approx(omega0 * 35 / 728, rel=1e-12)
    assert data[2, 1] < 1e-9


def test_defaults_applied(tmp_path):
    cfg = write_config(tmp_path, {"kind": "hom-scan", "delay_min": -1, "delay_max": 1})
    main([str(cfg), "--output", str(tmp_path), "--quiet"])
    _, _, data = read_csv(tmp_path / "out.csv")
    assert len(data) == DEFAULTS["hom-scan"]["n_delays"]


@pytest.mark.parametrize("config", sorted(CONFIGS.glob("*.json")), ids=lambda p: p.stem)
def test_bundled_configs_run(tmp_path, config):
    assert main([str(config), "--output", str(tmp_path), "--quiet"]) == EXIT_OK


def test_custom_mask_default_delays(tmp_path):
    cfg = write_config(tmp_path, {"kind": "custom-mask", "delay_min": -1, "delay_max": 1,
                                  "mask_x": {"kind": "zero"}, "mask_y": {"kind": "linear", "slope": 1.0}})
    assert main([str(cfg), "--output", str(tmp_path), "--quiet"]) == EXIT_OK
    _, _, data = read_csv(tmp_path / "out.csv")
    assert len(data) == DEFAULTS["custom-mask"]["n_delays"]
