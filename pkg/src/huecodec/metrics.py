"""Objective quality metrics: hue distortion, TMQI, and PSNR.

Hue distortion is measured two ways:

* ``delta_c`` -- mean Euclidean distance between the maximally saturated
  colors of a display-referred image and its HDR original.  Pairs where
  either pixel is gray contribute zero (saturation is undefined there).
* ``delta_h_mean`` -- mean of the CIEDE2000 hue term between two
  display-referred images.  To score an image against an HDR original,
  compare it against :func:`hue_reference`, which re-renders each pixel
  with its own lightness/chroma weights but the original's hue, so the
  difference isolates hue exactly.

TMQI follows the published reference definition (multi-scale structural
fidelity combined with statistical naturalness), with one documented
change: both luminance maps are stretched to a common 0..255 display
scale before the fidelity pass, which makes the score reflexive
(S(x, x) == 1) instead of normalizing only the reference side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import convolve2d
from scipy.signal.windows import gaussian as _gaussian_window
from scipy.stats import beta as _beta
from scipy.stats import norm as _norm

from . import hueplane
from .errors import ParameterError
from .tmo import luminance

__all__ = [
    "delta_c",
    "delta_c_field",
    "srgb_to_lab",
    "ciede2000",
    "ciede2000_hue",
    "delta_h_mean",
    "hue_reference",
    "TmqiScore",
    "tmqi",
    "psnr",
]


def _check_same_shape(a, b):
    if a.shape != b.shape:
        raise ParameterError(f"image dimensions differ: {a.shape} vs {b.shape}")


# ---------------------------------------------------------------------------
# Maximally-saturated-color distance

def delta_c_field(ldr, hdr) -> np.ndarray:
    """Per-pixel ||c_hdr - c_ldr||_2, zero where either side is gray."""
    ldr = np.asarray(ldr, dtype=np.float64)
    hdr = np.asarray(hdr, dtype=np.float64)
    _check_same_shape(ldr, hdr)
    c_l = hueplane.max_sat_color(ldr)
    c_h = hueplane.max_sat_color(hdr)
    both = hueplane.is_chromatic(c_l) & hueplane.is_chromatic(c_h)
    with np.errstate(invalid="ignore"):
        dist = np.sqrt(np.sum((c_h - c_l) ** 2, axis=-1))
    return np.where(both, dist, 0.0)


def delta_c(ldr, hdr) -> float:
    """Mean over all pixels of the saturation distance field."""
    return float(np.mean(delta_c_field(ldr, hdr)))


# ---------------------------------------------------------------------------
# sRGB -> CIELAB (D65/2 degrees)

_SRGB_TO_XYZ = (
    (0.4124564, 0.3575761, 0.1804375),
    (0.2126729, 0.7151522, 0.0721750),
    (0.0193339, 0.1191920, 0.9503041),
)
_D65 = (0.95047, 1.0, 1.08883)


def srgb_to_lab(pixel) -> np.ndarray:
    """Convert sRGB values in [0,1] to CIE L*a*b* (D65/2 degrees).

    Uses the piecewise sRGB transfer curve; output stacks (L*, a*, b*)
    along the last axis.
    """
    x = np.asarray(pixel, dtype=np.float64)
    if x.shape[-1] != 3:
        raise ParameterError("expected RGB triples in the last axis")
    lin = np.where(x <= 0.04045, x / 12.92, ((x + 0.055) / 1.055) ** 2.4)
    r, g, b = lin[..., 0], lin[..., 1], lin[..., 2]
    xyz = [
        (m[0] * r + m[1] * g + m[2] * b) / w
        for m, w in zip(_SRGB_TO_XYZ, _D65)
    ]
    eps = (6.0 / 29.0) ** 3
    kappa = (29.0 / 6.0) ** 2 / 3.0
    f = [np.where(t > eps, np.cbrt(t), kappa * t + 4.0 / 29.0) for t in xyz]
    lab = np.empty_like(x)
    lab[..., 0] = 116.0 * f[1] - 16.0
    lab[..., 1] = 500.0 * (f[0] - f[1])
    lab[..., 2] = 200.0 * (f[1] - f[2])
    return lab


# ---------------------------------------------------------------------------
# CIEDE2000

def _ciede2000_terms(lab1, lab2):
    """Shared intermediates of the CIEDE2000 formula (degree arithmetic)."""
    l1, a1, b1 = lab1[..., 0], lab1[..., 1], lab1[..., 2]
    l2, a2, b2 = lab2[..., 0], lab2[..., 1], lab2[..., 2]

    c1 = np.hypot(a1, b1)
    c2 = np.hypot(a2, b2)
    c_bar = 0.5 * (c1 + c2)
    c_bar7 = c_bar ** 7
    g = 0.5 * (1.0 - np.sqrt(c_bar7 / (c_bar7 + 25.0 ** 7)))
    a1p = (1.0 + g) * a1
    a2p = (1.0 + g) * a2
    c1p = np.hypot(a1p, b1)
    c2p = np.hypot(a2p, b2)

    h1p = np.degrees(np.arctan2(b1, a1p)) % 360.0
    h1p = np.where((b1 == 0) & (a1p == 0), 0.0, h1p)
    h2p = np.degrees(np.arctan2(b2, a2p)) % 360.0
    h2p = np.where((b2 == 0) & (a2p == 0), 0.0, h2p)

    cc = c1p * c2p
    dh = h2p - h1p
    dh = np.where(dh > 180.0, dh - 360.0, dh)
    dh = np.where(dh < -180.0, dh + 360.0, dh)
    dh = np.where(cc == 0.0, 0.0, dh)
    dhp_big = 2.0 * np.sqrt(cc) * np.sin(np.radians(0.5 * dh))

    hsum = h1p + h2p
    habs = np.abs(h1p - h2p)
    h_bar = np.where(
        habs <= 180.0, 0.5 * hsum,
        np.where(hsum < 360.0, 0.5 * (hsum + 360.0), 0.5 * (hsum - 360.0)))
    h_bar = np.where(cc == 0.0, hsum, h_bar)

    t = (1.0
         - 0.17 * np.cos(np.radians(h_bar - 30.0))
         + 0.24 * np.cos(np.radians(2.0 * h_bar))
         + 0.32 * np.cos(np.radians(3.0 * h_bar + 6.0))
         - 0.20 * np.cos(np.radians(4.0 * h_bar - 63.0)))

    l_bar = 0.5 * (l1 + l2)
    cp_bar = 0.5 * (c1p + c2p)
    s_l = 1.0 + 0.015 * (l_bar - 50.0) ** 2 / np.sqrt(20.0 + (l_bar - 50.0) ** 2)
    s_c = 1.0 + 0.045 * cp_bar
    s_h = 1.0 + 0.015 * cp_bar * t

    d_theta = 30.0 * np.exp(-(((h_bar - 275.0) / 25.0) ** 2))
    cp_bar7 = cp_bar ** 7
    r_c = 2.0 * np.sqrt(cp_bar7 / (cp_bar7 + 25.0 ** 7))
    r_t = -np.sin(np.radians(2.0 * d_theta)) * r_c

    return {
        "dl": l2 - l1, "dc": c2p - c1p, "dh": dhp_big,
        "s_l": s_l, "s_c": s_c, "s_h": s_h, "r_t": r_t,
    }


def ciede2000(lab1, lab2, k_l=1.0, k_c=1.0, k_h=1.0) -> np.ndarray | float:
    """Full CIEDE2000 color difference between Lab triples."""
    t = _ciede2000_terms(np.asarray(lab1, float), np.asarray(lab2, float))
    vl = t["dl"] / (k_l * t["s_l"])
    vc = t["dc"] / (k_c * t["s_c"])
    vh = t["dh"] / (k_h * t["s_h"])
    out = np.sqrt(vl ** 2 + vc ** 2 + vh ** 2 + t["r_t"] * vc * vh)
    return float(out) if out.ndim == 0 else out


def ciede2000_hue(lab1, lab2, k_h=1.0) -> np.ndarray | float:
    """Weighted CIEDE2000 hue difference |dH' / (k_H * S_H)|.

    Zero-chroma pairs score zero regardless of lightness.
    """
    t = _ciede2000_terms(np.asarray(lab1, float), np.asarray(lab2, float))
    out = np.abs(t["dh"] / (k_h * t["s_h"]))
    return float(out) if out.ndim == 0 else out


def hue_reference(ldr, hdr) -> np.ndarray:
    """Re-render ``ldr`` with each pixel's hue replaced by ``hdr``'s.

    Lightness and chroma weights stay those of ``ldr``, so comparing
    ``ldr`` against this rendering isolates the hue error.  Pixels whose
    HDR counterpart is gray pass through unchanged.
    """
    return hueplane.compensate_image(ldr, hdr)


def delta_h_mean(ldr_a, ldr_b) -> float:
    """Mean CIEDE2000 hue term between two display-referred images."""
    a = np.asarray(ldr_a, dtype=np.float64)
    b = np.asarray(ldr_b, dtype=np.float64)
    _check_same_shape(a, b)
    return float(np.mean(ciede2000_hue(srgb_to_lab(a), srgb_to_lab(b))))


# ---------------------------------------------------------------------------
# TMQI

@dataclass(frozen=True)
class TmqiScore:
    q: float  # overall quality
    s: float  # multi-scale structural fidelity
    n: float  # statistical naturalness


_TMQI_A = 0.8012
_TMQI_ALPHA = 0.3046
_TMQI_BETA = 0.7088
_TMQI_WEIGHTS = (0.0448, 0.2856, 0.3001, 0.2363, 0.1333)


def _to_gray_255(image) -> np.ndarray:
    img = np.asarray(image, dtype=np.float64)
    if img.ndim == 3:
        img = luminance(img)
    return 255.0 * img


def _stretch_255(lum) -> np.ndarray:
    lo, hi = lum.min(), lum.max()
    if hi == lo:
        return np.zeros_like(lum)
    return 255.0 * (lum - lo) / (hi - lo)


def _structural_fidelity(ref, img, window):
    levels = len(_TMQI_WEIGHTS)
    down = np.ones((2, 2)) / 4.0
    sf = 32.0
    scores = []
    for level in range(levels):
        sf /= 2.0
        if min(ref.shape) < window.shape[0]:
            raise ParameterError(
                "image too small for the coarsest TMQI analysis window")
        scores.append(_local_fidelity(ref, img, window, sf))
        if level < levels - 1:
            ref = convolve2d(ref, down, mode="valid")[::2, ::2]
            img = convolve2d(img, down, mode="valid")[::2, ::2]
    s = 1.0
    for score, weight in zip(scores, _TMQI_WEIGHTS):
        # strongly anti-correlated structure can push a level's mean
        # fidelity below zero; that floors the score instead of going
        # complex under the fractional weight
        s *= max(score, 0.0) ** weight
    return s


def _local_fidelity(ref, img, window, sf, c1=0.01, c2=10.0):
    mu1 = convolve2d(ref, window, mode="valid")
    mu2 = convolve2d(img, window, mode="valid")
    sigma1_sq = convolve2d(ref * ref, window, mode="valid") - mu1 * mu1
    sigma2_sq = convolve2d(img * img, window, mode="valid") - mu2 * mu2
    sigma12 = convolve2d(ref * img, window, mode="valid") - mu1 * mu2
    sigma1 = np.sqrt(np.maximum(sigma1_sq, 0.0))
    sigma2 = np.sqrt(np.maximum(sigma2_sq, 0.0))

    # Contrast below the visibility threshold (CSF at this scale) is
    # masked by mapping local std through a Gaussian CDF.
    csf = 100.0 * 2.6 * (0.0192 + 0.114 * sf) * np.exp(-((0.114 * sf) ** 1.1))
    u = 128.0 / (1.4 * csf)
    sigma1p = _norm.cdf(sigma1, loc=u, scale=u / 3.0)
    sigma2p = _norm.cdf(sigma2, loc=u, scale=u / 3.0)

    s_map = ((2.0 * sigma1p * sigma2p + c1)
             / (sigma1p ** 2 + sigma2p ** 2 + c1)
             * (sigma12 + c2) / (sigma1 * sigma2 + c2))
    return float(np.mean(s_map))


def _statistical_naturalness(lum_255) -> float:
    # Gaussian likelihood of the global mean and Beta likelihood of the
    # mean 11x11 block deviation, each normalized by its mode.
    u = float(np.mean(lum_255))
    h, w = lum_255.shape
    pad_h = (-h) % 11
    pad_w = (-w) % 11
    padded = np.pad(lum_255, ((0, pad_h), (0, pad_w)))
    blocks = padded.reshape(padded.shape[0] // 11, 11,
                            padded.shape[1] // 11, 11)
    sig = float(np.mean(np.std(blocks, axis=(1, 3))))

    phat1, phat2 = 4.4, 10.1
    muhat, sigmahat = 115.94, 27.99
    beta_mode = (phat1 - 1.0) / (phat1 + phat2 - 2.0)
    pc = _beta.pdf(sig / 64.29, phat1, phat2) / _beta.pdf(beta_mode, phat1, phat2)
    pb = _norm.pdf(u, muhat, sigmahat) / _norm.pdf(muhat, muhat, sigmahat)
    return float(pb * pc)


def tmqi(ldr, hdr) -> TmqiScore:
    """Tone Mapped image Quality Index of ``ldr`` against HDR ``hdr``.

    Q = a * S**alpha + (1 - a) * N**beta with the published constants
    a = 0.8012, alpha = 0.3046, beta = 0.7088.  Naturalness is computed
    on the display-scale LDR luminance; both luminance maps are stretched
    to 0..255 for the structural-fidelity pyramid.
    """
    ldr = np.asarray(ldr, dtype=np.float64)
    hdr = np.asarray(hdr, dtype=np.float64)
    if ldr.shape[:2] != hdr.shape[:2]:
        raise ParameterError(
            f"image dimensions differ: {ldr.shape} vs {hdr.shape}")
    l_ldr = _to_gray_255(ldr)
    l_hdr = _to_gray_255(hdr) if hdr.ndim == 3 else 255.0 * np.asarray(hdr, float)

    n = _statistical_naturalness(l_ldr)

    window = _gaussian_window(11, 1.5)
    window = np.outer(window, window)
    window /= window.sum()
    s = _structural_fidelity(_stretch_255(l_hdr), _stretch_255(l_ldr), window)

    s = min(max(s, 0.0), 1.0)
    n = min(max(n, 0.0), 1.0)
    q = _TMQI_A * s ** _TMQI_ALPHA + (1.0 - _TMQI_A) * n ** _TMQI_BETA
    return TmqiScore(q=min(max(q, 0.0), 1.0), s=s, n=n)


# ---------------------------------------------------------------------------
# PSNR

def psnr(a, b) -> float:
    """10 log10(1 / MSE) over all channels of two [0,1] images, in dB."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_same_shape(a, b)
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return float("inf")
    return float(10.0 * np.log10(1.0 / mse))
