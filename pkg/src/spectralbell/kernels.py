"""Backend selection for the hot loops.

The compiled extension is used when it was built; otherwise the numpy
fallback is imported.  Setting ``SPECTRALBELL_PURE_PYTHON=1`` forces the
fallback.
"""

import os

if os.environ.get("SPECTRALBELL_PURE_PYTHON", "") not in ("", "0"):
    from ._pykernels import hom_rates, orth_probability
    BACKEND = "python"
else:
    try:
        from ._ckernels import hom_rates, orth_probability
        BACKEND = "cython"
    except ImportError:
        from ._pykernels import hom_rates, orth_probability
        BACKEND = "python"

__all__ = ["BACKEND", "hom_rates", "orth_probability"]
