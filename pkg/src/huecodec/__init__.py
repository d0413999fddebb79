"""Two-layer HDR image coding with constant-hue-plane hue compensation.

The package is organized as a small numpy library:

* :mod:`huecodec.hdr_io`    -- RGBE / PFM / PPM / heatmap files
* :mod:`huecodec.hueplane`  -- hue-plane decomposition and compensation
* :mod:`huecodec.tmo`       -- global tone-mapping operators
* :mod:`huecodec.metrics`   -- hue distortion, TMQI, PSNR
* :mod:`huecodec.codec`     -- base + residual layers and the container
* :mod:`huecodec.cli`       -- the ``huecodec`` command-line tool

Images are plain numpy arrays: HDR images are (h, w, 3) float64 with
non-negative linear-light values, LDR images are (h, w, 3) float64 in
[0, 1].
"""

from . import codec, hdr_io, hueplane, metrics, synthetic, tmo
from .codec import decode_hdr, decode_ldr, encode, parse, serialize
from .errors import (
    DecodeError,
    FormatError,
    HueCodecError,
    ParameterError,
    TruncatedDataError,
    UnsupportedFeatureError,
)
from .hueplane import compensate_image, compensate_pixel, hue_coords, max_sat_color
from .metrics import delta_c, delta_h_mean, psnr, tmqi
from .tmo import TmoParams, tone_map

__version__ = "0.1.0"

__all__ = [
    "codec", "hdr_io", "hueplane", "metrics", "synthetic", "tmo",
    "encode", "decode_ldr", "decode_hdr", "serialize", "parse",
    "compensate_image", "compensate_pixel", "hue_coords", "max_sat_color",
    "delta_c", "delta_h_mean", "psnr", "tmqi",
    "TmoParams", "tone_map",
    "HueCodecError", "FormatError", "TruncatedDataError",
    "UnsupportedFeatureError", "ParameterError", "DecodeError",
    "__version__",
]
