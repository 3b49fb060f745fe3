"""Construction-complexity entropy estimation for symbol strings.

A string is recursively decomposed by repeatedly extracting the token that
precedes the current final token together with its maximal run length k,
regrouping all runs of that token accordingly; the expansion counts k_i of
this decomposition give the construction complexity

    C_T = sum_i log2(k_i + 1)

which grows with the difficulty of assembling the string and is insensitive
to symbol relabelling.  The complexity converts to a total-information
estimate through the inverse logarithmic integral,

    I = li^{-1}(C_T * ln 2)   [nats],

the normalisation under which maximally random strings carry about ln(2)
nats per binary symbol.  Reported entropies are in bits.

The decomposition itself is the package's hot loop.  A compiled kernel
(:mod:`fskey._tdecomp`) is selected at import when available; the
pure-Python fallback (:mod:`fskey._tdecomp_py`) computes byte-identical
results.  Set ``FSKEY_PURE_PYTHON=1`` to force the fallback, e.g. for the
backend benchmark.

Calibration
-----------
The inverse-li normalisation alone reports a stable fraction of the true
information content of i.i.d. uniform strings (about 0.447 of it,
near-constant over alphabet sizes 2..94 and lengths 1e4..1e6 for this
decomposition), so the estimate divides by a single measured scale factor.
``benchmarks/calibrate_tentropy.py`` reproduces the measurement with
frozen seeds; on held-out skewed and Markov sources the calibrated
estimator stays within about 5% of the true information content.
"""

from __future__ import annotations

import math
import os

import numpy as np
from scipy.optimize import brentq
from scipy.special import expi

if os.environ.get("FSKEY_PURE_PYTHON"):
    from fskey import _tdecomp_py as _kernel
else:
    try:
        from fskey import _tdecomp as _kernel  # type: ignore[attr-defined]
    except ImportError:
        from fskey import _tdecomp_py as _kernel

#: Name of the decomposition backend selected at import.
BACKEND = _kernel.__name__.rsplit(".", 1)[-1].lstrip("_")

_LN2 = math.log(2.0)

# Mean of li^{-1}(C_T ln 2) / (L ln A) over uniform reference strings; the
# reported entropy divides by this so uniform data measures its full rate.
CALIBRATION = 0.447


def decompose_counts(data: bytes) -> list[int]:
    """Expansion counts of the T-decomposition (backend dispatch)."""
    return _kernel.decompose_counts(data)


def t_complexity_value(data: bytes) -> float:
    """Construction complexity C_T = sum log2(k_i + 1) of a byte string."""
    counts = _kernel.decompose_counts(data)
    return float(np.sum(np.log2(np.asarray(counts, dtype=np.float64) + 1.0))) if counts else 0.0


def inverse_li(y: float) -> float:
    """Inverse of the logarithmic integral li on [0, inf).

    li(z) = Ei(ln z) is strictly increasing on (1, inf) and crosses zero at
    the Ramanujan-Soldner point ~1.4514, so the root is bracketed and found
    with Brent's method.
    """
    if y < 0:
        raise ValueError("inverse_li defined for non-negative arguments")
    hi = (y + 2.0) * (math.log(y + 2.0) + 4.0)
    while expi(math.log(hi)) < y:
        hi *= 2.0
    return brentq(lambda z: expi(math.log(z)) - y, 1.0 + 1e-12, hi, xtol=1e-9, rtol=8.9e-16)


def t_entropy_bits(data: bytes) -> tuple[float, float]:
    """Complexity and calibrated total-entropy estimate for a byte string.

    Returns
    -------
    (c_t, bits)
        The construction complexity and the estimated Shannon information
        content of the whole string in bits.
    """
    if len(data) == 0:
        raise ValueError("cannot estimate entropy of an empty string")
    c_t = t_complexity_value(data)
    nats = inverse_li(c_t * _LN2)
    return c_t, nats / _LN2 / CALIBRATION
