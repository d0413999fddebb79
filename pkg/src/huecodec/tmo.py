"""Global tone-mapping operators (linear HDR in, display-referred LDR out).

All operators share one two-pass structure: image statistics first (the
log-average luminance, and the maximum scaled luminance), then a pure
per-pixel mapping of luminance followed by color recombination, a clamp
to [0, 1], and power-law gamma encoding.  Identical inputs always produce
bitwise identical outputs.

Operators:

* ``reinhard_global``  -- photographic curve L(1 + L/Lw^2)/(1 + L) with an
  optional burn-out white point (default: none).
* ``global_photographic`` -- the same curve with the white point set
  automatically to the maximum scaled luminance, so the brightest pixel
  maps exactly to display white.  Used as the default operator.
* ``drago`` -- adaptive logarithmic mapping with bias parameter b.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ParameterError

OPERATORS = ("global_photographic", "reinhard_global", "drago")

LOG_AVERAGE_DELTA = 1e-6

# Rec. 709 luma weights.
_LUM_R, _LUM_G, _LUM_B = 0.2126, 0.7152, 0.0722


@dataclass(frozen=True)
class TmoParams:
    """Operator selection plus the knobs shared by all operators.

    ``l_avg`` and ``l_wmax`` are image statistics filled in by
    :func:`resolve`; they are required for inversion and are therefore
    carried in codestream metadata.  ``l_white = inf`` disables burn-out
    for ``reinhard_global``; ``global_photographic`` replaces it with the
    maximum scaled luminance when resolved.
    """

    operator: str = "global_photographic"
    key_a: float = 0.18
    l_white: float = math.inf
    bias: float = 0.85
    saturation: float = 1.0
    gamma: float = 2.2
    l_avg: float | None = None
    l_wmax: float | None = None

    def __post_init__(self):
        if self.operator not in OPERATORS:
            raise ParameterError(f"unknown operator {self.operator!r}")
        if not self.key_a > 0:
            raise ParameterError("key_a must be positive")
        if not self.l_white > 0:
            raise ParameterError("l_white must be positive (inf allowed)")
        if not 0.0 < self.bias <= 1.0:
            raise ParameterError("bias must lie in (0, 1]")
        if not 0.0 < self.saturation <= 1.0:
            raise ParameterError("saturation must lie in (0, 1]")
        if not self.gamma > 0:
            raise ParameterError("gamma must be positive")

    @property
    def resolved(self) -> bool:
        return self.l_avg is not None and self.l_wmax is not None


def luminance(pixel) -> np.ndarray:
    """Rec. 709 luminance 0.2126 R + 0.7152 G + 0.0722 B."""
    x = np.asarray(pixel, dtype=np.float64)
    return _LUM_R * x[..., 0] + _LUM_G * x[..., 1] + _LUM_B * x[..., 2]


def log_average_luminance(hdr) -> float:
    """exp(mean(log(delta + L))) with delta = 1e-6."""
    lum = luminance(hdr)
    if lum.size == 0:
        raise ParameterError("image is empty")
    return float(np.exp(np.mean(np.log(LOG_AVERAGE_DELTA + lum))))


def resolve(params: TmoParams, hdr) -> TmoParams:
    """Fill in the image statistics an operator and its inverse need.

    Computes the log-average luminance and the maximum key-scaled
    luminance; for ``global_photographic`` also pins the white point to
    that maximum.
    """
    l_avg = log_average_luminance(hdr)
    scaled = params.key_a * luminance(hdr) / l_avg
    l_wmax = float(scaled.max())
    l_white = params.l_white
    if params.operator == "global_photographic":
        l_white = l_wmax if l_wmax > 0 else 1.0
    return replace(params, l_avg=l_avg, l_wmax=l_wmax, l_white=l_white)


# ---------------------------------------------------------------------------
# Luminance curves (scalar or array in, same shape out)

def reinhard_curve(l_scaled, l_white=math.inf):
    """Photographic display luminance L(1 + L/Lw^2) / (1 + L)."""
    ls = np.asarray(l_scaled, dtype=np.float64)
    if math.isinf(l_white):
        return ls / (1.0 + ls)
    return ls * (1.0 + ls / (l_white * l_white)) / (1.0 + ls)

def reinhard_curve_inverse(l_display, l_white=math.inf):
    """Exact inverse of :func:`reinhard_curve` on [0, 1].

    With no white point the curve only reaches 1 in the limit, so inputs
    are capped just below 1; with a finite white point the curve hits 1 at
    exactly ``l_white`` and the quadratic is solved in a cancellation-free
    form.
    """
    ld = np.asarray(np.clip(l_display, 0.0, 1.0), dtype=np.float64)
    if math.isinf(l_white):
        ld = np.minimum(ld, 1.0 - 2.0 ** -20)
        return ld / (1.0 - ld)
    w2 = l_white * l_white
    # ls^2/w2 + ls(1 - ld) - ld = 0, stable root
    return 2.0 * ld / ((1.0 - ld) + np.sqrt((1.0 - ld) ** 2 + 4.0 * ld / w2))


def drago_curve(l_world, l_wmax, bias=0.85):
    """Adaptive logarithmic display luminance, 1.0 at ``l_wmax``."""
    lw = np.asarray(l_world, dtype=np.float64)
    if l_wmax <= 0:
        return np.zeros_like(lw)
    exponent = math.log(bias) / math.log(0.5)
    base = 2.0 + 8.0 * np.power(lw / l_wmax, exponent)
    return np.log1p(lw) / (math.log10(1.0 + l_wmax) * np.log(base))

def drago_curve_inverse(l_display, l_wmax, bias=0.85, iterations=80):
    """Invert :func:`drago_curve` by bisection on [0, l_wmax].

    The curve is strictly monotone, so plain bisection converges to far
    better than the 1e-4 relative accuracy the numeric inverse promises.
    """
    ld = np.asarray(np.clip(l_display, 0.0, 1.0), dtype=np.float64)
    lo = np.zeros_like(ld)
    hi = np.full_like(ld, l_wmax)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        too_low = drago_curve(mid, l_wmax, bias) < ld
        lo = np.where(too_low, mid, lo)
        hi = np.where(too_low, hi, mid)
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Full operators

def recombine(hdr_pixel, l_in, l_out, s=1.0) -> np.ndarray:
    """Scale color channels to the compressed luminance.

    Each channel becomes ``(x / l_in)**s * l_out``.  With s = 1 the
    channel ratios of the input survive exactly (until clamping).  Pixels
    with zero input luminance map to black.
    """
    x = np.asarray(hdr_pixel, dtype=np.float64)
    l_in = np.asarray(l_in, dtype=np.float64)[..., np.newaxis]
    l_out = np.asarray(l_out, dtype=np.float64)[..., np.newaxis]
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(l_in > 0, x / np.where(l_in > 0, l_in, 1.0), 0.0)
    if s != 1.0:
        ratio = np.power(ratio, s)
    return ratio * l_out


def tone_map(hdr, params: TmoParams) -> np.ndarray:
    """Apply the selected operator; returns an (h, w, 3) image in [0, 1]."""
    hdr = np.asarray(hdr, dtype=np.float64)
    if hdr.ndim != 3 or hdr.shape[-1] != 3:
        raise ParameterError("expected an (h, w, 3) HDR image")
    if not params.resolved:
        params = resolve(params, hdr)
    lum = luminance(hdr)
    scaled = params.key_a * lum / params.l_avg
    if params.operator in ("reinhard_global", "global_photographic"):
        l_display = reinhard_curve(scaled, params.l_white)
    else:
        l_display = drago_curve(scaled, params.l_wmax, params.bias)
    out = recombine(hdr, lum, l_display, params.saturation)
    out = np.clip(out, 0.0, 1.0)
    return np.power(out, 1.0 / params.gamma)


def tmo_reinhard_global(hdr, params: TmoParams | None = None) -> np.ndarray:
    params = replace(params or TmoParams(), operator="reinhard_global",
                     l_avg=None, l_wmax=None)
    return tone_map(hdr, params)


def tmo_drago(hdr, params: TmoParams | None = None) -> np.ndarray:
    params = replace(params or TmoParams(), operator="drago",
                     l_avg=None, l_wmax=None)
    return tone_map(hdr, params)


def tmo_default(hdr, params: TmoParams | None = None) -> np.ndarray:
    """Default operator: photographic curve with automatic white point."""
    params = replace(params or TmoParams(), operator="global_photographic",
                     l_avg=None, l_wmax=None)
    return tone_map(hdr, params)
