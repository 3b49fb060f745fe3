"""Secret-key generation from frequency-selective wireless channels.

Subpackages cover the full pipeline: multi-level quantization with
shift-token reconciliation (:mod:`fskey.quantizer`), a stochastic model of
the reciprocal channel (:mod:`fskey.channel`), the three-phase key-agreement
protocol (:mod:`fskey.protocol`), entropy estimation for the generated
secrets (:mod:`fskey.entropy`, :mod:`fskey.tcomplexity`), and covariance
extrapolation for secrecy scaling (:mod:`fskey.scaling`).  The ``fskey``
command-line tool drives reproducible experiments over these pieces.
"""

__version__ = "0.1.0"

from fskey.quantizer import (
    MetricSpace,
    QuantizationScheme,
    ReconcileToken,
    apply_token,
    build_scheme,
    encode_levels,
    make_token,
    quantize,
)

__all__ = [
    "MetricSpace",
    "QuantizationScheme",
    "ReconcileToken",
    "apply_token",
    "build_scheme",
    "encode_levels",
    "make_token",
    "quantize",
    "__version__",
]
