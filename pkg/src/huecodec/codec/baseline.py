"""Baseline lossy plane codec: 8x8 DCT, scaled quantization tables,
zigzag scan, and DC-differential / AC run-length Huffman coding with the
default code tables.

Planes are coded independently (no interleaving); each scan is a
self-contained bit stream padded to a byte boundary with 1-bits.  The
base layer converts RGB to YCbCr (full-range BT.601) and codes Y with the
luma tables and Cb/Cr with the chroma tables, with no chroma subsampling
so color fidelity is limited only by quantization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.fft import dctn, idctn

from ..errors import DecodeError, ParameterError
from ..hdr_io import quantize_u8
from . import tables

BLOCK = 8


# ---------------------------------------------------------------------------
# Block layout

def pad_to_blocks(plane) -> np.ndarray:
    """Edge-replicate a 2-D plane to multiples of the block size."""
    h, w = plane.shape
    return np.pad(plane, ((0, (-h) % BLOCK), (0, (-w) % BLOCK)), mode="edge")


def blockify(padded) -> np.ndarray:
    h, w = padded.shape
    return (padded.reshape(h // BLOCK, BLOCK, w // BLOCK, BLOCK)
            .transpose(0, 2, 1, 3)
            .reshape(-1, BLOCK, BLOCK))


def unblockify(blocks, padded_shape) -> np.ndarray:
    h, w = padded_shape
    return (blocks.reshape(h // BLOCK, w // BLOCK, BLOCK, BLOCK)
            .transpose(0, 2, 1, 3)
            .reshape(h, w))


# ---------------------------------------------------------------------------
# Transform + quantization

def _forward_blocks(plane, qtable) -> np.ndarray:
    """Centered plane -> (nblocks, 64) quantized zigzag coefficients."""
    blocks = blockify(pad_to_blocks(plane))
    coef = dctn(blocks, type=2, axes=(1, 2), norm="ortho").reshape(-1, 64)
    scaled = coef / qtable
    quant = np.trunc(scaled + np.copysign(0.5, scaled)).astype(np.int64)
    # Baseline coefficient range (guards the size categories).
    np.clip(quant[:, 1:], -1023, 1023, out=quant[:, 1:])
    np.clip(quant[:, :1], -1024, 1024, out=quant[:, :1])
    return quant[:, tables.ZIGZAG_TO_NATURAL]


def _inverse_blocks(zz, qtable, padded_shape) -> np.ndarray:
    natural = zz[:, tables.NATURAL_TO_ZIGZAG].astype(np.float64) * qtable
    blocks = idctn(natural.reshape(-1, BLOCK, BLOCK), type=2,
                   axes=(1, 2), norm="ortho")
    return unblockify(blocks, padded_shape)


# ---------------------------------------------------------------------------
# Entropy coding

def _encode_scan(zz, dc_enc, ac_enc) -> bytes:
    """Huffman-encode one plane's (nblocks, 64) zigzag coefficients."""
    out = bytearray()
    acc = 0
    nacc = 0

    def put(code, length):
        nonlocal acc, nacc
        acc = (acc << length) | code
        nacc += length
        while nacc >= 8:
            nacc -= 8
            out.append((acc >> nacc) & 0xFF)
        acc &= (1 << nacc) - 1

    prev_dc = 0
    for row in zz.tolist():
        diff = row[0] - prev_dc
        prev_dc = row[0]
        size = abs(diff).bit_length()
        code, length = dc_enc[size]
        put(code, length)
        if size:
            put(diff if diff > 0 else diff + (1 << size) - 1, size)

        run = 0
        for v in row[1:]:
            if v == 0:
                run += 1
                continue
            while run >= 16:
                code, length = ac_enc[0xF0]
                put(code, length)
                run -= 16
            size = abs(v).bit_length()
            code, length = ac_enc[(run << 4) | size]
            put(code, length)
            put(v if v > 0 else v + (1 << size) - 1, size)
            run = 0
        if run:
            code, length = ac_enc[0x00]
            put(code, length)

    if nacc:
        out.append(((acc << (8 - nacc)) | ((1 << (8 - nacc)) - 1)) & 0xFF)
    return bytes(out)


def _decode_scan(payload, nblocks, dc_lut, ac_lut) -> np.ndarray:
    """Inverse of :func:`_encode_scan`; raises DecodeError with the byte
    offset of the failure on malformed input."""
    dc_sym, dc_len = dc_lut
    ac_sym, ac_len = ac_lut
    data = payload
    size_limit = len(data)
    pos = 0
    acc = 0
    nacc = 0
    out = np.zeros((nblocks, 64), dtype=np.int64)
    prev_dc = 0

    def fail(msg):
        raise DecodeError(msg, byte_offset=min(pos, size_limit))

    def read_symbol(sym_lut, len_lut):
        nonlocal acc, nacc, pos
        while nacc < 16 and pos < size_limit:
            acc = (acc << 8) | data[pos]
            pos += 1
            nacc += 8
        if nacc >= 16:
            window = (acc >> (nacc - 16)) & 0xFFFF
        else:
            window = ((acc << (16 - nacc)) | ((1 << (16 - nacc)) - 1)) & 0xFFFF
        length = len_lut[window]
        if length == 0 or length > nacc:
            fail("invalid Huffman code")
        nacc -= length
        acc &= (1 << nacc) - 1
        return sym_lut[window]

    def read_value(size):
        nonlocal acc, nacc, pos
        while nacc < size and pos < size_limit:
            acc = (acc << 8) | data[pos]
            pos += 1
            nacc += 8
        if nacc < size:
            fail("entropy payload truncated")
        nacc -= size
        value = (acc >> nacc) & ((1 << size) - 1)
        acc &= (1 << nacc) - 1
        if value < (1 << (size - 1)):
            value -= (1 << size) - 1
        return value

    for b in range(nblocks):
        size = read_symbol(dc_sym, dc_len)
        diff = read_value(size) if size else 0
        prev_dc += diff
        out[b, 0] = prev_dc
        k = 1
        while k < 64:
            symbol = read_symbol(ac_sym, ac_len)
            if symbol == 0x00:  # end of block
                break
            if symbol == 0xF0:  # run of sixteen zeros
                k += 16
                if k > 64:
                    fail("zero run overflows block")
                continue
            run, size = symbol >> 4, symbol & 0x0F
            k += run
            if k > 63:
                fail("coefficient index overflows block")
            out[b, k] = read_value(size)
            k += 1

    if size_limit - pos >= 1 or nacc >= 8:
        fail("trailing bytes after final block")
    return out


# ---------------------------------------------------------------------------
# Color transform (full-range BT.601)

def rgb_to_ycbcr(rgb) -> np.ndarray:
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    y = 0.299 * r + 0.587 * g + 0.114 * b
    cb = 128.0 - 0.168735892 * r - 0.331264108 * g + 0.5 * b
    cr = 128.0 + 0.5 * r - 0.418687589 * g - 0.081312411 * b
    return np.stack([y, cb, cr], axis=-1)


def ycbcr_to_rgb(ycc) -> np.ndarray:
    y, cb, cr = ycc[..., 0], ycc[..., 1] - 128.0, ycc[..., 2] - 128.0
    r = y + 1.402 * cr
    g = y - 0.344136286 * cb - 0.714136286 * cr
    b = y + 1.772 * cb
    return np.stack([r, g, b], axis=-1)


# ---------------------------------------------------------------------------
# Plane and base-layer codecs

_KIND_TABLES = {
    "luma": (tables.DC_LUMA_ENC, tables.AC_LUMA_ENC,
             tables.DC_LUMA_LUT, tables.AC_LUMA_LUT),
    "chroma": (tables.DC_CHROMA_ENC, tables.AC_CHROMA_ENC,
               tables.DC_CHROMA_LUT, tables.AC_CHROMA_LUT),
}


def encode_plane(plane, qtable, kind) -> bytes:
    """Code one 2-D plane (0..255 domain) against a quantization table."""
    dc_enc, ac_enc, _, _ = _KIND_TABLES[kind]
    centered = np.asarray(plane, dtype=np.float64) - 128.0
    return _encode_scan(_forward_blocks(centered, qtable), dc_enc, ac_enc)


def decode_plane(payload, width, height, qtable, kind) -> np.ndarray:
    """Decode one plane scan back to the 0..255 domain (not yet clipped)."""
    _, _, dc_lut, ac_lut = _KIND_TABLES[kind]
    padded_h = height + (-height) % BLOCK
    padded_w = width + (-width) % BLOCK
    nblocks = (padded_h // BLOCK) * (padded_w // BLOCK)
    zz = _decode_scan(payload, nblocks, dc_lut, ac_lut)
    padded = _inverse_blocks(zz, qtable, (padded_h, padded_w))
    return padded[:height, :width] + 128.0


@dataclass(frozen=True)
class BaseCodestream:
    """Entropy-coded base layer plus everything needed to decode it."""

    width: int
    height: int
    quality: int
    luma_qtable: np.ndarray
    chroma_qtable: np.ndarray
    scans: tuple  # (Y, Cb, Cr) payload bytes


def check_quality(quality) -> int:
    q = int(quality)
    if not 1 <= q <= 100:
        raise ParameterError("quality must lie in [1, 100]")
    return q


def encode_base(ldr, quality) -> BaseCodestream:
    """Code a [0,1] RGB image as the standalone base layer."""
    q = check_quality(quality)
    img = np.asarray(ldr, dtype=np.float64)
    if img.ndim != 3 or img.shape[-1] != 3:
        raise ParameterError("expected an (h, w, 3) image")
    if np.any(img < 0) or np.any(img > 1):
        raise ParameterError("LDR components must lie in [0, 1]")
    rgb8 = quantize_u8(img).astype(np.float64)
    ycc = rgb_to_ycbcr(rgb8)
    luma_q = tables.quality_scale(tables.LUMA_QUANT, q)
    chroma_q = tables.quality_scale(tables.CHROMA_QUANT, q)
    scans = (
        encode_plane(ycc[..., 0], luma_q, "luma"),
        encode_plane(ycc[..., 1], chroma_q, "chroma"),
        encode_plane(ycc[..., 2], chroma_q, "chroma"),
    )
    height, width = img.shape[:2]
    return BaseCodestream(width=width, height=height, quality=q,
                          luma_qtable=luma_q, chroma_qtable=chroma_q,
                          scans=scans)


def decode_base(base: BaseCodestream) -> np.ndarray:
    """Decode a base layer to a [0,1] RGB image (8-bit representable)."""
    w, h = base.width, base.height
    planes = [
        decode_plane(base.scans[0], w, h, base.luma_qtable, "luma"),
        decode_plane(base.scans[1], w, h, base.chroma_qtable, "chroma"),
        decode_plane(base.scans[2], w, h, base.chroma_qtable, "chroma"),
    ]
    rgb = ycbcr_to_rgb(np.stack(planes, axis=-1))
    return np.clip(np.round(rgb), 0, 255) / 255.0
