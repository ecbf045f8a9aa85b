"""Compare the compiled and numpy kernels on representative workloads.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from spectralbell import _pykernels

try:
    from spectralbell import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def hom_workload(n_bins, n_delays, rng):
    w = rng.random(n_bins)
    w /= w.sum()
    v = (np.arange(n_bins) + 0.5) / n_bins
    dphi = rng.uniform(-np.pi, np.pi, n_bins)
    tau = np.linspace(-40, 40, n_delays)
    return (w, v, dphi, tau, 1.0)


def orth_workload(n_bins, rng):
    def c(*shape):
        return rng.normal(size=shape) + 1j * rng.normal(size=shape)
    return (c(n_bins, 2, 2), c(n_bins, 2, 2), c(n_bins, 2, 2), 1.0 / n_bins)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    rng = np.random.default_rng(0)
    cases = [
        ("hom_rates 4096 bins x 801 delays", "hom_rates", hom_workload(4096, 801, rng)),
        ("hom_rates 256 bins x 1 delay", "hom_rates", hom_workload(256, 1, rng)),
        ("orth_probability 4096 bins", "orth_probability", orth_workload(4096, rng)),
        ("orth_probability 256 bins", "orth_probability", orth_workload(256, rng)),
    ]
    print(f"{'workload':<36}{'numpy':>12}{'cython':>12}{'speedup':>10}")
    for label, name, wl in cases:
        n = 3 if wl[0].size > 1000 and name == "hom_rates" else 200
        py = min(timeit.repeat(lambda: getattr(_pykernels, name)(*wl), number=n,
                               repeat=args.repeat)) / n
        if _ckernels is None:
            print(f"{label:<36}{py * 1e3:>10.3f}ms{'n/a':>12}{'':>10}")
            continue
        cy = min(timeit.repeat(lambda: getattr(_ckernels, name)(*wl), number=n,
                               repeat=args.repeat)) / n
        print(f"{label:<36}{py * 1e3:>10.3f}ms{cy * 1e3:>10.3f}ms{py / cy:>9.1f}x")


if __name__ == "__main__":
    main()
