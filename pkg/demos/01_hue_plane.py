"""Walk through the constant-hue-plane algebra on a few pixels.

Every RGB color sits on a triangle spanned by white, black, and its
maximally saturated color.  The barycentric weights on that triangle are
what hue compensation preserves while the saturation direction is
swapped out.
"""

import numpy as np

from huecodec.hueplane import (
    compensate_pixel,
    hue_coords,
    max_sat_color,
    recompose,
)

pixel = np.array([0.8, 0.5, 0.2])
coords = hue_coords(pixel)
sat = max_sat_color(pixel)

print(f"pixel                {pixel}")
print(f"weights              a_w={coords.a_w:.3f} a_k={coords.a_k:.3f} "
      f"a_c={coords.a_c:.3f}  (sum={coords.a_w + coords.a_k + coords.a_c:.3f})")
print(f"max-saturated color  {sat}")
print(f"recomposed           {recompose(coords, sat)}")

# The same normalization applies to scene-linear (HDR) pixels of any
# magnitude, giving each one a hue target on the same triangle.
hdr_pixel = np.array([14.0, 2.0, 2.0])  # a deep red, far above display range
print(f"\nHDR pixel            {hdr_pixel}")
print(f"HDR saturation       {max_sat_color(hdr_pixel)}")

# Hue compensation: keep the display pixel's lightness/chroma weights,
# take the hue from the HDR original.
compensated = compensate_pixel(pixel, hdr_pixel)
print(f"compensated LDR      {compensated}")
print(f"its saturation       {max_sat_color(compensated)}   <- matches HDR")
print(f"min/max preserved    {compensated.min():.3f}/{compensated.max():.3f} "
      f"vs a_w={coords.a_w:.3f}, a_w+a_c={coords.a_w + coords.a_c:.3f}")

# Gray pixels have no saturation direction and pass through untouched.
gray = np.array([0.4, 0.4, 0.4])
print(f"\ngray in, gray out    {compensate_pixel(gray, hdr_pixel)}")
