"""Independent brute-force references.

Written from scratch with explicit 4-component two-photon vectors in the
(HH, HV, VH, VV) ordering; nothing here calls the package's Jones
machinery or its rate formulas.
"""

import numpy as np

S2 = np.sqrt(2.0)


def linear_pol(angle):
    return np.array([np.cos(angle), np.sin(angle)], dtype=complex)


def shaped_pair_vectors(g, beta, tx_up, ty_up, tx_lo, ty_lo):
    """Per-bin H/V two-photon vectors of g/sqrt2 (|HH> + e^{i beta}|VV>) after
    per-frequency phases on the X = (H+V)/sqrt2 and Y = (H-V)/sqrt2 axes."""
    x = np.array([1, 1]) / S2
    y = np.array([1, -1]) / S2
    out = []
    for k in range(len(g)):
        up = np.exp(1j * tx_up[k]) * np.outer(x, x) + np.exp(1j * ty_up[k]) * np.outer(y, y)
        lo = np.exp(1j * tx_lo[k]) * np.outer(x, x) + np.exp(1j * ty_lo[k]) * np.outer(y, y)
        src = g[k] / S2 * np.array([1, 0, 0, np.exp(1j * beta)])
        out.append(np.kron(up, lo) @ src)
    return np.array(out)


def pair_vectors_from_coeffs(g, coeffs_hv):
    """Bell-type vectors g_k * c with c given as a 4-vector."""
    return np.asarray(g)[:, None] * np.asarray(coeffs_hv)[None, :]


def orth_rate(vectors, dv, alpha):
    """2 * P(one photon along alpha, the other along alpha + 90 deg)."""
    a, b = linear_pol(alpha), linear_pol(alpha + np.pi / 2)
    p = np.abs(vectors @ np.kron(a, b).conj()) ** 2 + np.abs(vectors @ np.kron(b, a).conj()) ** 2
    return 2.0 * float(np.sum(p) * dv)


def same_rate(vectors, dv, alpha):
    """Half of 2 * P(both photons along alpha)."""
    a = linear_pol(alpha)
    return float(np.sum(np.abs(vectors @ np.kron(a, a).conj()) ** 2) * dv)


def closed_form_direct(weights, dphase, mu=1.0):
    """Straight loop over bins, no vectorization shared with the package."""
    total = 0.0
    for w, d in zip(weights, dphase):
        total += w * np.cos(d)
    return 1.0 - mu * total
