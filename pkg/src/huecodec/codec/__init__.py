"""Two-layer codec: baseline base layer, log-ratio residual, container."""

from .baseline import BaseCodestream, decode_base, encode_base
from .container import (
    ResidualCodestream,
    TwoLayerStream,
    parse,
    parse_residual_section,
    residual_layer,
    serialize,
)
from .pipeline import (
    RESIDUAL_EPSILON,
    apply_residual,
    compute_residual,
    decode_hdr,
    decode_ldr,
    decode_residual,
    encode,
    encode_residual,
    inverse_tmo,
)

__all__ = [
    "BaseCodestream",
    "ResidualCodestream",
    "TwoLayerStream",
    "RESIDUAL_EPSILON",
    "encode_base",
    "decode_base",
    "inverse_tmo",
    "compute_residual",
    "apply_residual",
    "encode_residual",
    "decode_residual",
    "encode",
    "decode_ldr",
    "decode_hdr",
    "serialize",
    "parse",
    "parse_residual_section",
    "residual_layer",
]
