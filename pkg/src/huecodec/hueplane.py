"""Constant-hue-plane algebra on RGB pixels.

Every RGB color lies on a triangle ("constant hue plane") spanned by white
``w = (1,1,1)``, black ``k = (0,0,0)`` and the maximally saturated color
``c`` sharing its hue.  A display-referred pixel ``x`` decomposes as

    x = a_w * w + a_k * k + a_c * c

with barycentric weights ``a_w = min(x)``, ``a_c = max(x) - min(x)``,
``a_k = 1 - max(x)``, and ``c = (x - min(x)) / (max(x) - min(x))``.  The
same normalization applies to unbounded linear-light pixels, which is what
makes hue transfer between an HDR original and its tone-mapped rendition
possible: keep (a_w, a_k, a_c) from the rendition, take ``c`` from the
original.

All functions are vectorized over leading axes; pixels live in the last
axis of length 3.  Achromatic pixels (max == min within tolerance) have no
defined ``c`` and are represented by NaN rows.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import ParameterError

# max - min below this (relative to max for bright pixels) counts as gray;
# the saturation normalization divides by it.
ACHROMATIC_TOL = 1e-10


class HueCoords(NamedTuple):
    """Barycentric weights on the constant hue plane (white, black, chroma)."""

    a_w: np.ndarray
    a_k: np.ndarray
    a_c: np.ndarray


def hue_coords(pixel) -> HueCoords:
    """Decompose display-referred pixels in [0,1]^3 into (a_w, a_k, a_c).

    The weights are non-negative and sum to 1.  Raises ParameterError for
    components outside [0, 1].
    """
    x = np.asarray(pixel, dtype=np.float64)
    if x.shape[-1] != 3:
        raise ParameterError("expected RGB triples in the last axis")
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise ParameterError("pixel components must lie in [0, 1]")
    mn = x.min(axis=-1)
    mx = x.max(axis=-1)
    return HueCoords(a_w=mn, a_k=1.0 - mx, a_c=mx - mn)


def max_sat_color(pixel) -> np.ndarray:
    """Maximally saturated color (x - min) / (max - min) of each pixel.

    Accepts non-negative pixels of any magnitude.  The result has its
    largest component exactly 1 and the smallest exactly 0.  Achromatic
    pixels yield NaN rows (the saturation is undefined for gray).
    """
    x = np.asarray(pixel, dtype=np.float64)
    if x.shape[-1] != 3:
        raise ParameterError("expected RGB triples in the last axis")
    if not np.all(np.isfinite(x)) or np.any(x < 0.0):
        raise ParameterError("pixel components must be finite and >= 0")
    mn = x.min(axis=-1, keepdims=True)
    mx = x.max(axis=-1, keepdims=True)
    span = mx - mn
    chromatic = span > ACHROMATIC_TOL * np.maximum(mx, 1.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        c = (x - mn) / span
    return np.where(chromatic, c, np.nan)


def is_chromatic(c) -> np.ndarray:
    """True for pixels whose maximally saturated color exists (non-NaN)."""
    return ~np.isnan(np.asarray(c)[..., 0])


def render_max_sat(image, gray=0.5) -> np.ndarray:
    """Render each pixel's maximally saturated color as a displayable image.

    Achromatic pixels, which have no saturation direction, are painted
    mid-gray by default.
    """
    c = max_sat_color(image)
    return np.where(np.isnan(c), gray, c)


def recompose(coords: HueCoords, c) -> np.ndarray:
    """Rebuild pixels from hue-plane weights and a maximally saturated color.

    Black contributes nothing, so each channel is ``a_w + a_c * c``.  An
    achromatic (NaN) ``c`` is only consistent with a_c at the gray
    tolerance; beyond it a ParameterError is raised.
    """
    a_w = np.asarray(coords.a_w, dtype=np.float64)[..., np.newaxis]
    a_c = np.asarray(coords.a_c, dtype=np.float64)[..., np.newaxis]
    c = np.asarray(c, dtype=np.float64)
    gray = np.isnan(c[..., :1])
    if np.any(gray & (a_c > ACHROMATIC_TOL)):
        raise ParameterError("achromatic color paired with a_c > 0")
    out = np.where(gray, a_w, a_w + a_c * c)
    return out


def compensate_pixel(ldr_pixel, hdr_pixel) -> np.ndarray:
    """Replace one LDR pixel's hue with the hue of its HDR counterpart.

    The LDR weights (a_w, a_k, a_c) are kept, the maximally saturated
    color is taken from the HDR pixel, so the output's min and max equal
    a_w and a_w + a_c while the hue matches the original scene.  If the
    HDR pixel is gray there is no target hue and the LDR pixel passes
    through unchanged.
    """
    return _compensate(ldr_pixel, hdr_pixel)


def compensate_image(ldr, hdr) -> np.ndarray:
    """Per-pixel hue compensation of an (h, w, 3) image pair."""
    ldr = np.asarray(ldr, dtype=np.float64)
    hdr = np.asarray(hdr, dtype=np.float64)
    if ldr.shape != hdr.shape:
        raise ParameterError(
            f"image dimensions differ: {ldr.shape} vs {hdr.shape}")
    return _compensate(ldr, hdr)


def _compensate(ldr, hdr):
    ldr = np.asarray(ldr, dtype=np.float64)
    coords = hue_coords(ldr)
    c_hdr = max_sat_color(hdr)
    chromatic = is_chromatic(c_hdr)[..., np.newaxis]
    a_w = coords.a_w[..., np.newaxis]
    a_c = coords.a_c[..., np.newaxis]
    with np.errstate(invalid="ignore"):
        replaced = a_w + a_c * c_hdr
    return np.where(chromatic, replaced, ldr)
