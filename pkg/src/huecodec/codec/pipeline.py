"""End-to-end two-layer coding pipeline.

Encoding runs: tone map -> optional hue compensation -> base layer
encode -> base layer *decode* -> inverse tone mapping -> log2-ratio
residual against the decoded base (closed loop, so base-layer loss never
leaks into the HDR reconstruction) -> container.  Decoding the LDR image
touches only the base layer; decoding HDR multiplies the inverse-tone-
mapped base by 2**residual per channel.

There is no separate "modified" inverse operator: because the residual is
computed against the decoded (possibly compensated) base image, whatever
the compensation did to the base is automatically accounted for.
"""

from __future__ import annotations

import numpy as np

from ..errors import DecodeError, ParameterError
from ..hueplane import compensate_image
from ..tmo import (
    TmoParams,
    drago_curve_inverse,
    luminance,
    reinhard_curve_inverse,
    resolve,
    tone_map,
)
from . import tables
from .baseline import (
    BaseCodestream,
    check_quality,
    decode_base,
    decode_plane,
    encode_base,
    encode_plane,
)
from .container import (
    ResidualCodestream,
    TwoLayerStream,
    parse,
    residual_layer,
    serialize,
)

RESIDUAL_EPSILON = 2.0 ** -16


def inverse_tmo(ldr, params: TmoParams) -> np.ndarray:
    """Estimate linear HDR values from a display-referred image.

    The image is linearized (gamma power), its luminance is pushed
    through the analytic inverse of the operator's luminance curve
    (numeric bisection for the logarithmic operator), and channels are
    rescaled by the inverse of the recombination step.  Requires resolved
    parameters (the image statistics stored at encode time).
    """
    if not params.resolved:
        raise ParameterError("inverse tone mapping needs resolved statistics")
    img = np.asarray(ldr, dtype=np.float64)
    if img.ndim != 3 or img.shape[-1] != 3:
        raise ParameterError("expected an (h, w, 3) image")
    lin = np.power(np.clip(img, 0.0, 1.0), params.gamma)
    l_display = luminance(lin)
    if params.operator in ("reinhard_global", "global_photographic"):
        scaled = reinhard_curve_inverse(l_display, params.l_white)
    else:
        scaled = drago_curve_inverse(l_display, params.l_wmax, params.bias)
    lum = scaled * params.l_avg / params.key_a
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(l_display[..., None] > 0,
                         lin / np.where(l_display[..., None] > 0,
                                        l_display[..., None], 1.0),
                         0.0)
    if params.saturation != 1.0:
        ratio = np.power(ratio, 1.0 / params.saturation)
    return ratio * lum[..., None]


def compute_residual(hdr, base_reconstruction, epsilon=RESIDUAL_EPSILON):
    """Quantize per-channel log2 ratios to 8-bit planes.

    Returns ``(codes, r_min, r_max, flags)`` where ``codes`` is an
    (h, w, 3) uint8 array mapping [r_min, r_max] linearly to 0..255 per
    channel, and ``flags`` marks channels whose ratio is constant (their
    plane carries no payload).
    """
    if epsilon <= 0:
        raise ParameterError("epsilon must be positive")
    x = np.asarray(hdr, dtype=np.float64)
    y = np.asarray(base_reconstruction, dtype=np.float64)
    if x.shape != y.shape:
        raise ParameterError(f"image dimensions differ: {x.shape} vs {y.shape}")
    r = np.log2((x + epsilon) / (y + epsilon))
    r_min = r.min(axis=(0, 1))
    r_max = r.max(axis=(0, 1))
    flags = r_min == r_max
    span = np.where(flags, 1.0, r_max - r_min)
    codes = np.clip(np.floor((r - r_min) / span * 255.0 + 0.5), 0, 255)
    return codes.astype(np.uint8), r_min, r_max, flags


def _dequantize_residual(codes, r_min, r_max) -> np.ndarray:
    return r_min + codes / 255.0 * (r_max - r_min)


def apply_residual(base_reconstruction, r, epsilon) -> np.ndarray:
    """Invert :func:`compute_residual`'s ratio: (x + eps) * 2**r - eps."""
    y = np.asarray(base_reconstruction, dtype=np.float64)
    return np.maximum((y + epsilon) * np.exp2(r) - epsilon, 0.0)


def encode_residual(hdr, base_reconstruction, quality,
                    epsilon=RESIDUAL_EPSILON) -> ResidualCodestream:
    """Build the residual layer against a decoded base reconstruction."""
    q = check_quality(quality)
    codes, r_min, r_max, flags = compute_residual(hdr, base_reconstruction,
                                                  epsilon)
    qtable = tables.quality_scale(tables.LUMA_QUANT, q)
    scans = []
    for ch in range(3):
        if flags[ch]:
            scans.append(b"")
        else:
            scans.append(encode_plane(codes[..., ch].astype(np.float64),
                                      qtable, "luma"))
    height, width = codes.shape[:2]
    return ResidualCodestream(width=width, height=height, quality=q,
                              epsilon=epsilon, qtable=qtable,
                              flags=tuple(bool(f) for f in flags),
                              r_min=tuple(float(v) for v in r_min),
                              r_max=tuple(float(v) for v in r_max),
                              scans=tuple(scans))


def decode_residual(res: ResidualCodestream) -> np.ndarray:
    """Decode the residual layer back to per-channel log2 ratios."""
    r = np.empty((res.height, res.width, 3), dtype=np.float64)
    for ch in range(3):
        if res.flags[ch]:
            r[..., ch] = res.r_min[ch]
            continue
        plane = decode_plane(res.scans[ch], res.width, res.height,
                             res.qtable, "luma")
        codes = np.clip(np.round(plane), 0, 255)
        r[..., ch] = _dequantize_residual(codes, res.r_min[ch], res.r_max[ch])
    return r


def encode(hdr, params: TmoParams | None = None, quality=80,
           compensation=True) -> TwoLayerStream:
    """Encode an HDR image into a two-layer stream.

    ``compensation`` switches the hue-compensation stage on the base
    layer; everything else (including the closed-loop residual) is
    identical between the two modes.
    """
    q = check_quality(quality)
    hdr = np.asarray(hdr, dtype=np.float64)
    if hdr.ndim != 3 or hdr.shape[-1] != 3:
        raise ParameterError("expected an (h, w, 3) HDR image")
    if not np.all(np.isfinite(hdr)) or np.any(hdr < 0):
        raise ParameterError("HDR components must be finite and >= 0")
    params = resolve(params or TmoParams(), hdr)
    ldr = tone_map(hdr, params)
    if compensation:
        ldr = compensate_image(ldr, hdr)
    base = encode_base(ldr, q)
    base_hdr = inverse_tmo(decode_base(base), params)
    residual = encode_residual(hdr, base_hdr, q)
    return TwoLayerStream(base=base, params=params, residual=residual)


def decode_ldr(stream) -> np.ndarray:
    """Decode the display-referred image from the base layer alone."""
    stream = _as_stream(stream)
    return decode_base(stream.base)


def decode_hdr(stream) -> np.ndarray:
    """Decode the HDR image using both layers."""
    stream = _as_stream(stream)
    res = residual_layer(stream)
    if (res.width, res.height) != (stream.base.width, stream.base.height):
        raise DecodeError("residual dimensions do not match base layer")
    base_hdr = inverse_tmo(decode_base(stream.base), stream.params)
    return apply_residual(base_hdr, decode_residual(res), res.epsilon)


def _as_stream(stream) -> TwoLayerStream:
    if isinstance(stream, TwoLayerStream):
        return stream
    return parse(stream)


__all__ = [
    "RESIDUAL_EPSILON",
    "inverse_tmo",
    "compute_residual",
    "apply_residual",
    "encode_residual",
    "decode_residual",
    "encode",
    "decode_ldr",
    "decode_hdr",
    "encode_base",
    "decode_base",
    "BaseCodestream",
    "ResidualCodestream",
    "TwoLayerStream",
    "serialize",
    "parse",
]
