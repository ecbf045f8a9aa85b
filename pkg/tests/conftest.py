import numpy as np
import pytest

from spectralbell.spectral import make_grid, spectrum_from_samples, spectrum_gaussian


@pytest.fixture
def grid():
    return make_grid(10.0, 1.0, 256)


@pytest.fixture
def gauss(grid):
    return spectrum_gaussian(grid, 0.125)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_spectrum(grid, rng):
    """Random complex envelope; smooth or rough, depending on the draw."""
    if rng.random() < 0.5:
        amp = rng.normal(size=grid.n_bins) + 1j * rng.normal(size=grid.n_bins)
    else:
        v = grid.detunings / grid.detuning_max
        width = rng.uniform(0.05, 0.6)
        amp = np.exp(-(v / width) ** 2 / 4) * np.exp(1j * rng.normal(0, 2) * v**2)
    return spectrum_from_samples(grid, amp)
