"""Sample files in, CSV curves out.

Sample files: ``#`` comment lines and blank lines are skipped; every other
line holds two whitespace-separated numbers and there must be exactly
``n_bins`` of them.  For masks the columns are the phase at ``omega0 + v_k``
and at ``omega0 - v_k``; for spectra they are the real and imaginary parts
of ``g(v_k)``.  Samples are never interpolated.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .spectral import PhaseMask, SpectralGrid, Spectrum, mask_custom, spectrum_from_samples

__all__ = [
    "FileFormatError",
    "read_samples",
    "parse_custom_mask",
    "parse_custom_spectrum",
    "format_number",
    "curve_csv",
    "bell_curves_csv",
    "table_csv",
    "write_text",
]


class FileFormatError(ValueError):
    """A sample file does not follow the two-column format."""


def read_samples(path, n_rows: int) -> np.ndarray:
    path = Path(path)
    rows = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise FileFormatError(
                    f"{path}:{lineno}: expected 2 columns, found {len(parts)}"
                )
            try:
                values = [float(p) for p in parts]
            except ValueError:
                raise FileFormatError(f"{path}:{lineno}: malformed number in {line!r}") from None
            if not all(math.isfinite(x) for x in values):
                raise FileFormatError(f"{path}:{lineno}: non-finite value in data row {len(rows) + 1}")
            rows.append(values)
    if len(rows) != n_rows:
        raise FileFormatError(f"{path}: expected {n_rows} data rows, found {len(rows)}")
    return np.array(rows, dtype=float)


def parse_custom_mask(path, grid: SpectralGrid) -> PhaseMask:
    return mask_custom(grid, read_samples(path, grid.n_bins))


def parse_custom_spectrum(path, grid: SpectralGrid) -> Spectrum:
    data = read_samples(path, grid.n_bins)
    return spectrum_from_samples(grid, data[:, 0] + 1j * data[:, 1])


def format_number(x: float) -> str:
    """12 significant digits, scientific notation."""
    x = float(x)
    if x == 0.0:
        x = 0.0  # drop the sign of negative zero
    return f"{x:.11e}"


def _metadata_lines(metadata: dict) -> list[str]:
    return [f"# {key} = {json.dumps(metadata[key], sort_keys=True)}" for key in sorted(metadata)]


def table_csv(columns: dict, metadata: dict | None = None) -> str:
    """CSV text with ``#`` metadata lines, a header row and fixed-format numbers."""
    names = list(columns)
    data = [np.asarray(columns[n], dtype=float) for n in names]
    lines = _metadata_lines(metadata or {})
    lines.append(",".join(names))
    for row in zip(*data):
        lines.append(",".join(format_number(v) for v in row))
    return "\n".join(lines) + "\n"


def curve_csv(curve) -> str:
    """Serialize a ScanCurve: header ``parameter,rate``."""
    meta = dict(curve.metadata)
    meta["parameter_name"] = curve.parameter_name
    meta["normalization"] = curve.normalization
    return table_csv({"parameter": curve.parameter_values, "rate": curve.rates}, meta)


def bell_curves_csv(curves, metadata: dict | None = None) -> str:
    """Serialize BellCurves: header ``parameter,r_orth,r_same`` with angles in radians."""
    meta = dict(metadata or {})
    meta["parameter_name"] = "alpha_rad"
    meta["state_label"] = curves.state_label.name if curves.state_label else None
    meta["mu"] = curves.mu
    meta["r_same_note"] = "includes the factor 1/2 of the polarizer + half-wave-plate path"
    return table_csv(
        {"parameter": curves.alphas, "r_orth": curves.r_orth, "r_same": curves.r_same}, meta
    )


def write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
