"""Tour of the quality metrics on controlled inputs.

Shows the CIEDE2000 hue term isolating hue from lightness/chroma, the
TMQI score reacting to structure loss and over/under-exposure, and PSNR
as the plain codec-fidelity check.
"""

import numpy as np

from huecodec.metrics import (
    ciede2000,
    ciede2000_hue,
    psnr,
    srgb_to_lab,
    tmqi,
)
from huecodec.tmo import TmoParams, tone_map

# --- CIEDE2000 and its hue term ------------------------------------------
red = srgb_to_lab(np.array([0.7, 0.2, 0.2]))
dark_red = srgb_to_lab(np.array([0.45, 0.13, 0.13]))
orange = srgb_to_lab(np.array([0.7, 0.45, 0.1]))

print("CIEDE2000 (full / hue term only)")
print(f"  red vs darker red : {ciede2000(red, dark_red):6.2f} / "
      f"{ciede2000_hue(red, dark_red):5.2f}   (lightness change, hue kept)")
print(f"  red vs orange     : {ciede2000(red, orange):6.2f} / "
      f"{ciede2000_hue(red, orange):5.2f}   (real hue shift)")

# --- TMQI ------------------------------------------------------------------
from scipy.ndimage import gaussian_filter

from huecodec.synthetic import patch_grid

hdr = patch_grid()
good = tone_map(hdr, TmoParams())
crushed = np.clip(good * 0.25, 0.0, 1.0)              # severe underexposure
smeared = gaussian_filter(good, sigma=(4.0, 4.0, 0))  # structure wiped out

for label, ldr in (("well mapped", good), ("underexposed", crushed),
                   ("smeared", smeared)):
    score = tmqi(ldr, hdr)
    print(f"TMQI {label:13s}: Q={score.q:.4f}  S={score.s:.4f}  "
          f"N={score.n:.4f}")

# --- PSNR -------------------------------------------------------------------
noisy = np.clip(good + np.random.default_rng(0).normal(0, 0.01, good.shape),
                0.0, 1.0)
print(f"PSNR vs itself: {psnr(good, good)}")
print(f"PSNR vs 1% noise: {psnr(good, noisy):.1f} dB")
