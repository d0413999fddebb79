"""Readers and writers for the image files used by the pipeline.

Formats:

* Radiance RGBE (``.hdr``) -- read only; flat and new-style run-length
  scanlines, ``-Y <h> +X <w>`` orientation.
* PFM (``PF`` binary float) -- read and write; written files are canonical
  (little-endian, scale -1.0, bottom-up rows).
* Binary PPM (``P6``, maxval 255) -- 8-bit output for display-referred
  images and heatmaps; a reader is included so command-line round trips
  work on our own files.

HDR images are (h, w, 3) float64 arrays of non-negative linear radiance;
LDR images are (h, w, 3) float64 arrays in [0, 1].  Scalar fields are
(h, w) float64 arrays.
"""

from __future__ import annotations

import io as _io
import re

import numpy as np

from .errors import (
    FormatError,
    ParameterError,
    TruncatedDataError,
    UnsupportedFeatureError,
)

__all__ = [
    "read_rgbe",
    "read_pfm",
    "write_pfm",
    "read_ppm",
    "write_ppm",
    "write_heatmap",
    "load_image",
    "quantize_u8",
    "HEATMAP_TABLE",
]


def _as_stream(data) -> _io.BufferedIOBase:
    if isinstance(data, (bytes, bytearray, memoryview)):
        return _io.BytesIO(bytes(data))
    return data


# ---------------------------------------------------------------------------
# Radiance RGBE

def read_rgbe(data) -> np.ndarray:
    """Decode a Radiance RGBE stream into an (h, w, 3) linear float image.

    Each RGBE quadruple (R, G, B, E) decodes to
    ``(R + 0.5, G + 0.5, B + 0.5) * 2**(E - 136)`` for E > 0 and to black
    for E == 0.  Both flat scanlines and the new run-length encoding are
    accepted.  Only the ``-Y <h> +X <w>`` orientation is supported.
    """
    f = _as_stream(data)
    signature = f.readline()
    if not signature.startswith((b"#?RADIANCE", b"#?RGBE")):
        raise FormatError("missing #?RADIANCE / #?RGBE signature")
    # Header: variable lines until a blank line, then the resolution line.
    while True:
        line = f.readline()
        if line == b"":
            raise TruncatedDataError("header ended before resolution line")
        if line.strip() == b"":
            break
    resolution = f.readline().decode("ascii", "replace").strip()
    m = re.fullmatch(r"-Y (\d+) \+X (\d+)", resolution)
    if m is None:
        if re.fullmatch(r"[-+][XY] \d+ [-+][XY] \d+", resolution):
            raise UnsupportedFeatureError(
                f"unsupported scanline orientation: {resolution!r}")
        raise FormatError(f"bad resolution line: {resolution!r}")
    height, width = int(m.group(1)), int(m.group(2))
    if width <= 0 or height <= 0:
        raise FormatError("non-positive image dimensions")

    rgbe = np.empty((height, width, 4), dtype=np.uint8)
    for y in range(height):
        rgbe[y] = _read_scanline(f, width)
    return _rgbe_to_float(rgbe)


def _read_scanline(f, width) -> np.ndarray:
    head = f.read(4)
    if len(head) < 4:
        raise TruncatedDataError("scanline header truncated")
    # the run-length marker is only legal for widths in [8, 32767]
    if (8 <= width <= 0x7FFF and head[0] == 2 and head[1] == 2
            and (head[2] << 8 | head[3]) == width):
        return _read_rle_scanline(f, width)
    # Flat scanline: the 4 bytes already read are the first pixel.
    rest = f.read(4 * (width - 1))
    if len(rest) < 4 * (width - 1):
        raise TruncatedDataError("flat scanline truncated")
    return np.frombuffer(head + rest, dtype=np.uint8).reshape(width, 4)


def _read_rle_scanline(f, width) -> np.ndarray:
    out = np.empty((4, width), dtype=np.uint8)
    for ch in range(4):
        pos = 0
        while pos < width:
            code = f.read(1)
            if not code:
                raise TruncatedDataError("run-length scanline truncated")
            n = code[0]
            if n > 128:  # run of a repeated byte
                count = n - 128
                value = f.read(1)
                if not value:
                    raise TruncatedDataError("run-length run truncated")
                if pos + count > width:
                    raise TruncatedDataError("run overflows scanline width")
                out[ch, pos:pos + count] = value[0]
            else:  # literal bytes
                count = n
                literal = f.read(count)
                if len(literal) < count:
                    raise TruncatedDataError("literal span truncated")
                if pos + count > width:
                    raise TruncatedDataError("literal overflows scanline width")
                out[ch, pos:pos + count] = np.frombuffer(literal, np.uint8)
            pos += count
        if pos != width:
            raise TruncatedDataError("scanline length mismatch")
    return out.T


def _rgbe_to_float(rgbe) -> np.ndarray:
    mantissa = rgbe[..., :3].astype(np.float64) + 0.5
    exponent = rgbe[..., 3].astype(np.int32)
    scale = np.ldexp(1.0, exponent - 136)[..., np.newaxis]
    out = mantissa * scale
    out[rgbe[..., 3] == 0] = 0.0
    return out


# ---------------------------------------------------------------------------
# PFM

def read_pfm(data) -> np.ndarray:
    """Decode a binary ``PF`` color PFM into an (h, w, 3) float image.

    The scale token's sign selects endianness (negative = little-endian);
    rows are stored bottom-up and returned top-down.  Grayscale ``Pf``
    files are rejected, as are NaN or negative samples.
    """
    f = _as_stream(data)
    magic = _read_token(f)
    if magic == b"Pf":
        raise UnsupportedFeatureError("grayscale PFM is not supported")
    if magic != b"PF":
        raise FormatError(f"not a PFM stream (magic {magic!r})")
    try:
        width = int(_read_token(f))
        height = int(_read_token(f))
        scale = float(_read_token(f))
    except ValueError as exc:
        raise FormatError(f"malformed PFM header: {exc}") from None
    if width <= 0 or height <= 0:
        raise FormatError("non-positive image dimensions")
    if scale == 0:
        raise FormatError("zero scale factor")
    dtype = "<f4" if scale < 0 else ">f4"
    count = width * height * 3
    raw = f.read(count * 4)
    if len(raw) < count * 4:
        raise TruncatedDataError("PFM pixel data truncated")
    pixels = np.frombuffer(raw, dtype=dtype).reshape(height, width, 3)
    pixels = pixels[::-1].astype(np.float64)
    if np.any(np.isnan(pixels)) or np.any(pixels < 0):
        raise FormatError("PFM contains NaN or negative samples")
    return pixels


def _read_token(f) -> bytes:
    # Tokens are separated by single whitespace bytes (newline or space).
    token = b""
    while True:
        ch = f.read(1)
        if ch == b"":
            raise TruncatedDataError("PFM header truncated")
        if ch in b" \t\r\n":
            if token:
                return token
            continue
        token += ch


def write_pfm(image) -> bytes:
    """Encode an (h, w, 3) float image as canonical little-endian PFM."""
    img = _check_hdr(image)
    height, width = img.shape[:2]
    header = f"PF\n{width} {height}\n-1.0\n".encode("ascii")
    body = img[::-1].astype("<f4").tobytes()
    return header + body


# ---------------------------------------------------------------------------
# PPM

def quantize_u8(values) -> np.ndarray:
    """Map [0,1] floats to 8-bit codes with round-half-up, clamped."""
    v = np.asarray(values, dtype=np.float64)
    return np.clip(np.floor(v * 255.0 + 0.5), 0, 255).astype(np.uint8)


def write_ppm(image) -> bytes:
    """Encode an (h, w, 3) image in [0,1] as binary P6, maxval 255."""
    img = np.asarray(image, dtype=np.float64)
    if img.ndim != 3 or img.shape[-1] != 3:
        raise ParameterError("expected an (h, w, 3) image")
    if np.any(img < 0) or np.any(img > 1) or not np.all(np.isfinite(img)):
        raise ParameterError("LDR components must lie in [0, 1]")
    height, width = img.shape[:2]
    header = f"P6\n{width} {height}\n255\n".encode("ascii")
    return header + quantize_u8(img).tobytes()


def read_ppm(data) -> np.ndarray:
    """Decode binary P6 (maxval 255) into an (h, w, 3) image in [0,1]."""
    f = _as_stream(data)
    if _read_token(f) != b"P6":
        raise FormatError("not a binary PPM stream")
    try:
        width = int(_read_token(f))
        height = int(_read_token(f))
        maxval = int(_read_token(f))
    except ValueError as exc:
        raise FormatError(f"malformed PPM header: {exc}") from None
    if maxval != 255:
        raise UnsupportedFeatureError("only maxval 255 PPM is supported")
    raw = f.read(width * height * 3)
    if len(raw) < width * height * 3:
        raise TruncatedDataError("PPM pixel data truncated")
    img = np.frombuffer(raw, dtype=np.uint8).reshape(height, width, 3)
    return img.astype(np.float64) / 255.0


# ---------------------------------------------------------------------------
# Heatmaps

def _build_heatmap_table() -> np.ndarray:
    # Fixed 256-entry black->red->yellow->white ramp (v1).  Luminance is
    # monotone in the index, and the table is frozen by this formula so
    # heatmap bytes are reproducible across runs and versions.
    t = np.arange(256) / 255.0
    r = np.clip(3.0 * t, 0.0, 1.0)
    g = np.clip(3.0 * t - 1.0, 0.0, 1.0)
    b = np.clip(3.0 * t - 2.0, 0.0, 1.0)
    return quantize_u8(np.stack([r, g, b], axis=-1))


HEATMAP_TABLE = _build_heatmap_table()


def write_heatmap(field, vmax) -> bytes:
    """Colorize an (h, w) scalar field and encode it as binary P6.

    Values are clamped to [0, vmax], normalized, and looked up in the
    fixed 256-entry ramp ``HEATMAP_TABLE`` (index = round(255 * v / vmax)).
    """
    if not np.isfinite(vmax) or vmax <= 0:
        raise ParameterError("vmax must be a positive finite number")
    f = np.asarray(field, dtype=np.float64)
    if f.ndim != 2:
        raise ParameterError("expected an (h, w) scalar field")
    if not np.all(np.isfinite(f)):
        raise ParameterError("scalar field contains non-finite values")
    idx = quantize_u8(np.clip(f, 0.0, vmax) / vmax)
    rgb = HEATMAP_TABLE[idx]
    height, width = f.shape
    header = f"P6\n{width} {height}\n255\n".encode("ascii")
    return header + rgb.tobytes()


# ---------------------------------------------------------------------------
# Path-level convenience

def _check_hdr(image) -> np.ndarray:
    img = np.asarray(image, dtype=np.float64)
    if img.ndim != 3 or img.shape[-1] != 3:
        raise ParameterError("expected an (h, w, 3) image")
    if not np.all(np.isfinite(img)) or np.any(img < 0):
        raise ParameterError("HDR components must be finite and >= 0")
    return img


def load_image(path) -> np.ndarray:
    """Load .hdr/.pfm (linear float) or .ppm ([0,1]) by file extension."""
    name = str(path).lower()
    with open(path, "rb") as f:
        data = f.read()
    if name.endswith(".hdr"):
        return read_rgbe(data)
    if name.endswith(".pfm"):
        return read_pfm(data)
    if name.endswith(".ppm"):
        return read_ppm(data)
    raise UnsupportedFeatureError(f"unrecognized image extension: {path}")
