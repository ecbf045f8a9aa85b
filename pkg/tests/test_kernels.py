import os
import subprocess
import sys

import numpy as np
import pytest

from spectralbell import _pykernels, kernels

ckernels = pytest.importorskip("spectralbell._ckernels", reason="compiled extension not built")


def _hom_inputs(rng, n=300, m=57):
    w = rng.random(n)
    w /= w.sum()
    v = (np.arange(n) + 0.5) / n
    dphi = rng.uniform(-np.pi, np.pi, n)
    tau = rng.uniform(-30, 30, m)
    return w, v, dphi, tau


@pytest.mark.parametrize("mu", [1.0, 0.79, 0.0])
def test_hom_rates_backends_agree(rng, mu):
    args = _hom_inputs(rng)
    a = ckernels.hom_rates(*args, mu)
    b = _pykernels.hom_rates(*args, mu)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)


def test_hom_rates_blocked_path(rng, monkeypatch):
    # force many small blocks in the numpy path
    monkeypatch.setattr(_pykernels, "_BLOCK", 64)
    args = _hom_inputs(rng, n=50, m=40)
    np.testing.assert_allclose(_pykernels.hom_rates(*args, 1.0),
                               ckernels.hom_rates(*args, 1.0), rtol=0, atol=1e-12)


def test_hom_rates_non_contiguous_input(rng):
    w, v, dphi, tau = _hom_inputs(rng, n=200)
    big = np.vstack([w, w]).T  # column slices are strided
    np.testing.assert_allclose(ckernels.hom_rates(big[:, 0], v, dphi, tau[::2], 1.0),
                               _pykernels.hom_rates(w, v, dphi, tau[::2], 1.0), atol=1e-12)


def test_orth_probability_backends_agree(rng):
    n = 128
    amp = rng.normal(size=(n, 2, 2)) + 1j * rng.normal(size=(n, 2, 2))
    up = rng.normal(size=(n, 2, 2)) + 1j * rng.normal(size=(n, 2, 2))
    lo = rng.normal(size=(n, 2, 2)) + 1j * rng.normal(size=(n, 2, 2))
    a = ckernels.orth_probability(amp, up, lo, 0.01)
    b = _pykernels.orth_probability(amp, up, lo, 0.01)
    assert a == pytest.approx(b, rel=1e-13)


def test_selected_backend():
    if os.environ.get("SPECTRALBELL_PURE_PYTHON", "") not in ("", "0"):
        assert kernels.BACKEND == "python"
    else:
        assert kernels.BACKEND == "cython"
        assert kernels.hom_rates is ckernels.hom_rates


def test_environment_forces_fallback():
    env = dict(os.environ, SPECTRALBELL_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import spectralbell.kernels as k; print(k.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
