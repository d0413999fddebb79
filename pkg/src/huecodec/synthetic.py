"""Deterministic synthetic HDR test images.

Real photographic HDR sources are large and unevenly licensed, so the
regression corpus is generated: smooth chromatic gradients, a hue wheel,
saturated patch grids, a sunset-like scene, and filtered-noise fields.
Every generator is seeded and pure, so the corpus is bitwise stable.
All images are strictly positive with dynamic ranges of roughly three to
four orders of magnitude.
"""

from __future__ import annotations

import numpy as np
from scipy.ndimage import gaussian_filter

DEFAULT_SIZE = (192, 192)


def _hue_to_rgb(h):
    """Map hue angles in [0, 1) to fully saturated RGB."""
    h = np.asarray(h) * 6.0
    r = np.clip(np.abs(h - 3.0) - 1.0, 0.0, 1.0)
    g = np.clip(2.0 - np.abs(h - 2.0), 0.0, 1.0)
    b = np.clip(2.0 - np.abs(h - 4.0), 0.0, 1.0)
    return np.stack([r, g, b], axis=-1)


def _saturate(base_rgb, saturation):
    """Blend toward white: s=1 keeps the color, s=0 is white."""
    return 1.0 - saturation[..., None] * (1.0 - base_rgb)


def hue_exposure_ramp(size=DEFAULT_SIZE) -> np.ndarray:
    """Hue sweeps horizontally, exposure sweeps vertically over ~4 decades."""
    h, w = size
    hue = np.tile(np.linspace(0.0, 1.0, w, endpoint=False), (h, 1))
    sat = np.tile(np.linspace(0.25, 0.9, w), (h, 1))
    colors = _saturate(_hue_to_rgb(hue), sat)
    exposure = np.logspace(-1.5, 1.8, h)[:, None, None]
    return colors * exposure + 1e-3


def color_wheel(size=DEFAULT_SIZE) -> np.ndarray:
    """Hue by angle, saturation by radius, bright core, dim surround."""
    h, w = size
    y, x = np.mgrid[0:h, 0:w]
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
    dy, dx = (y - cy) / cy, (x - cx) / cx
    radius = np.hypot(dy, dx)
    angle = (np.arctan2(dy, dx) / (2.0 * np.pi)) % 1.0
    sat = np.clip(radius, 0.0, 1.0) * 0.95
    colors = _saturate(_hue_to_rgb(angle), sat)
    exposure = 30.0 * np.exp(-2.5 * radius ** 2) + 0.05
    return colors * exposure[..., None] + 1e-3


def patch_grid(size=DEFAULT_SIZE, cells=8, seed=7) -> np.ndarray:
    """Grid of saturated patches under a smooth diagonal exposure field."""
    h, w = size
    rng = np.random.default_rng(seed)
    hues = rng.random((cells, cells))
    sats = rng.uniform(0.4, 0.95, (cells, cells))
    ys = np.minimum(np.arange(h) * cells // h, cells - 1)
    xs = np.minimum(np.arange(w) * cells // w, cells - 1)
    colors = _saturate(_hue_to_rgb(hues), sats)[np.ix_(ys, xs)]
    y, x = np.mgrid[0:h, 0:w]
    exposure = np.exp2(6.0 * (x + y) / (h + w) - 3.0) * 4.0
    return colors * exposure[..., None] + 1e-3


def sunset_scene(size=DEFAULT_SIZE, seed=11) -> np.ndarray:
    """Sky gradient with a bright sun disk over textured warm ground."""
    h, w = size
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:h, 0:w]
    t = y / (h - 1)
    sky = np.stack([
        0.4 + 1.6 * t,          # warms toward the horizon
        0.5 + 0.5 * t,
        1.6 - 1.3 * t,
    ], axis=-1) * 2.0
    horizon = int(0.62 * h)
    ground_tex = gaussian_filter(rng.standard_normal((h, w)), 4.0)
    ground = np.stack([
        0.30 + 0.12 * ground_tex,
        0.22 + 0.10 * ground_tex,
        0.08 + 0.04 * ground_tex,
    ], axis=-1) * 0.6
    img = np.where((y >= horizon)[..., None], np.clip(ground, 0.01, None), sky)
    sun_d2 = ((y - 0.3 * h) ** 2 + (x - 0.7 * w) ** 2) / (0.06 * h) ** 2
    sun = np.exp(-sun_d2)[..., None] * np.array([160.0, 130.0, 80.0])
    return img + sun + 1e-3


def filtered_noise(size=DEFAULT_SIZE, seed=23) -> np.ndarray:
    """Independent smooth random fields per channel, exponentiated."""
    h, w = size
    rng = np.random.default_rng(seed)
    channels = []
    for sigma in (5.0, 9.0, 14.0):
        field = gaussian_filter(rng.standard_normal((h, w)), sigma)
        field = field / (np.abs(field).max() + 1e-12)
        channels.append(np.exp2(4.0 * field))
    return np.stack(channels, axis=-1) * 0.5 + 1e-3


CORPUS = {
    "ramp": hue_exposure_ramp,
    "wheel": color_wheel,
    "patches": patch_grid,
    "sunset": sunset_scene,
    "noise": filtered_noise,
}


def build_corpus(size=DEFAULT_SIZE) -> dict:
    """Name -> image dict of the full synthetic corpus."""
    return {name: make(size) for name, make in CORPUS.items()}


def write_corpus(directory, size=DEFAULT_SIZE) -> str:
    """Write the corpus as PFM files plus a manifest; returns its path."""
    import os

    from .hdr_io import write_pfm

    os.makedirs(directory, exist_ok=True)
    lines = []
    for name, image in build_corpus(size).items():
        path = os.path.join(directory, f"{name}.pfm")
        with open(path, "wb") as f:
            f.write(write_pfm(image))
        lines.append(f"{path},{name}")
    manifest = os.path.join(directory, "manifest.txt")
    with open(manifest, "w") as f:
        f.write("\n".join(lines) + "\n")
    return manifest
