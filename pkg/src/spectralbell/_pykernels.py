"""Pure-numpy implementations of the hot loops.  Same signatures as ``_ckernels``."""

import numpy as np

# delays x bins blocks are capped at this many elements to bound memory
_BLOCK = 1 << 20


def hom_rates(weights, detunings, dphase, delays, mu):
    """``sum_k w_k (1 - mu cos(2 tau_j v_k + dphase_k))`` for every delay ``tau_j``.

    Written term-by-term so each summand is non-negative; with normalized
    weights this is ``1 - mu * sum_k w_k cos(...)``.
    """
    w = np.ascontiguousarray(weights, dtype=float)
    v2 = 2.0 * np.ascontiguousarray(detunings, dtype=float)
    dphi = np.ascontiguousarray(dphase, dtype=float)
    tau = np.ascontiguousarray(delays, dtype=float)
    out = np.empty(tau.shape[0])
    step = max(1, _BLOCK // max(1, w.shape[0]))
    for start in range(0, tau.shape[0], step):
        block = tau[start:start + step]
        out[start:start + step] = (1.0 - mu * np.cos(np.outer(block, v2) + dphi)) @ w
    return out


def orth_probability(amplitude, upper, lower, dv):
    """Probability that the two photons leave by opposite ports of an H/V PBS
    after the per-bin transforms ``upper`` (+v photon) and ``lower`` (-v photon)."""
    a = np.asarray(upper) @ np.asarray(amplitude) @ np.swapaxes(np.asarray(lower), -1, -2)
    return float((np.sum(np.abs(a[:, 0, 1]) ** 2) + np.sum(np.abs(a[:, 1, 0]) ** 2)) * dv)
