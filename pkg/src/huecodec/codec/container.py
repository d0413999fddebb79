"""Two-layer container serialization.

Byte layout (all integers little-endian):

    stream    := magic "HXT1" | version u16 (= 1) | section*3
    section   := length u32 | payload          # order: base, residual, meta

    base      := width u32 | height u32 | quality u16
               | luma qtable 64 x u16 | chroma qtable 64 x u16
               | 3 x scan                       # Y, Cb, Cr
    scan      := length u32 | bytes

    residual  := width u32 | height u32 | quality u16 | epsilon f64
               | qtable 64 x u16
               | 3 x channel                    # R, G, B log2-ratio planes
    channel   := flag u8 (1 = constant plane) | r_min f64 | r_max f64 | scan

    meta      := operator u8 | key_a f64 | l_white f64 | bias f64
               | saturation f64 | gamma f64 | l_avg f64 | l_wmax f64

Parsing splits the three sections without touching the residual payload;
the residual is only decoded when the HDR layer is requested, so an
LDR-only decode never reads residual bytes.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from ..errors import DecodeError
from ..tmo import OPERATORS, TmoParams
from .baseline import BaseCodestream

MAGIC = b"HXT1"
VERSION = 1

_META_FMT = "<B7d"


@dataclass(frozen=True)
class ResidualCodestream:
    """Entropy-coded log2-ratio planes for HDR reconstruction."""

    width: int
    height: int
    quality: int
    epsilon: float
    qtable: np.ndarray
    flags: tuple      # 3 x bool, True when the plane is constant
    r_min: tuple      # 3 x float
    r_max: tuple      # 3 x float
    scans: tuple      # 3 x bytes (empty for constant planes)


@dataclass(frozen=True)
class TwoLayerStream:
    """Parsed or freshly encoded two-layer stream.

    After :func:`parse`, ``residual`` is None and the raw section bytes
    are kept in ``residual_raw`` until :func:`residual_layer` is asked to
    decode them.
    """

    base: BaseCodestream
    params: TmoParams
    residual: ResidualCodestream | None = None
    residual_raw: bytes | None = None


class _Reader:
    def __init__(self, data, base_offset=0):
        self.data = data
        self.pos = 0
        self.base_offset = base_offset

    def take(self, n, what):
        if self.pos + n > len(self.data):
            raise DecodeError(f"truncated {what}",
                              byte_offset=self.base_offset + self.pos)
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def unpack(self, fmt, what):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt), what))

    def lp_bytes(self, what):
        (n,) = self.unpack("<I", what)
        return self.take(n, what)


def _pack_qtable(table) -> bytes:
    return np.asarray(table, dtype="<u2").tobytes()


def _unpack_qtable(raw) -> np.ndarray:
    return np.frombuffer(raw, dtype="<u2").astype(np.int64)


def _serialize_base(base: BaseCodestream) -> bytes:
    parts = [struct.pack("<IIH", base.width, base.height, base.quality),
             _pack_qtable(base.luma_qtable), _pack_qtable(base.chroma_qtable)]
    for scan in base.scans:
        parts.append(struct.pack("<I", len(scan)))
        parts.append(scan)
    return b"".join(parts)


def _parse_base(data, base_offset) -> BaseCodestream:
    r = _Reader(data, base_offset)
    width, height, quality = r.unpack("<IIH", "base header")
    luma = _unpack_qtable(r.take(128, "luma quantization table"))
    chroma = _unpack_qtable(r.take(128, "chroma quantization table"))
    scans = tuple(r.lp_bytes("base scan") for _ in range(3))
    if r.pos != len(data):
        raise DecodeError("trailing bytes in base section",
                          byte_offset=base_offset + r.pos)
    return BaseCodestream(width=width, height=height, quality=quality,
                          luma_qtable=luma, chroma_qtable=chroma, scans=scans)


def _serialize_residual(res: ResidualCodestream) -> bytes:
    parts = [struct.pack("<IIHd", res.width, res.height, res.quality,
                         res.epsilon),
             _pack_qtable(res.qtable)]
    for flag, lo, hi, scan in zip(res.flags, res.r_min, res.r_max, res.scans):
        parts.append(struct.pack("<Bdd", int(flag), lo, hi))
        parts.append(struct.pack("<I", len(scan)))
        parts.append(scan)
    return b"".join(parts)


def parse_residual_section(data, base_offset=0) -> ResidualCodestream:
    r = _Reader(data, base_offset)
    width, height, quality, epsilon = r.unpack("<IIHd", "residual header")
    qtable = _unpack_qtable(r.take(128, "residual quantization table"))
    flags, r_min, r_max, scans = [], [], [], []
    for _ in range(3):
        flag, lo, hi = r.unpack("<Bdd", "residual channel header")
        flags.append(bool(flag))
        r_min.append(lo)
        r_max.append(hi)
        scans.append(r.lp_bytes("residual scan"))
    if r.pos != len(data):
        raise DecodeError("trailing bytes in residual section",
                          byte_offset=base_offset + r.pos)
    return ResidualCodestream(width=width, height=height, quality=quality,
                              epsilon=epsilon, qtable=qtable,
                              flags=tuple(flags), r_min=tuple(r_min),
                              r_max=tuple(r_max), scans=tuple(scans))


def _serialize_meta(params: TmoParams) -> bytes:
    if not params.resolved:
        raise DecodeError("cannot serialize unresolved tone-mapping metadata")
    return struct.pack(_META_FMT, OPERATORS.index(params.operator),
                       params.key_a, params.l_white, params.bias,
                       params.saturation, params.gamma,
                       params.l_avg, params.l_wmax)


def _parse_meta(data, base_offset) -> TmoParams:
    if len(data) != struct.calcsize(_META_FMT):
        raise DecodeError("metadata section has wrong length",
                          byte_offset=base_offset)
    op, key_a, l_white, bias, sat, gamma, l_avg, l_wmax = struct.unpack(
        _META_FMT, data)
    if op >= len(OPERATORS):
        raise DecodeError("unknown operator id in metadata",
                          byte_offset=base_offset)
    if not (math.isfinite(l_avg) and math.isfinite(l_wmax)):
        raise DecodeError("non-finite statistics in metadata",
                          byte_offset=base_offset)
    return TmoParams(operator=OPERATORS[op], key_a=key_a, l_white=l_white,
                     bias=bias, saturation=sat, gamma=gamma,
                     l_avg=l_avg, l_wmax=l_wmax)


def serialize(stream: TwoLayerStream) -> bytes:
    """Serialize to container bytes; the inverse of :func:`parse`."""
    if stream.residual is not None:
        residual = _serialize_residual(stream.residual)
    elif stream.residual_raw is not None:
        residual = stream.residual_raw
    else:
        raise DecodeError("stream has no residual layer")
    sections = [_serialize_base(stream.base), residual,
                _serialize_meta(stream.params)]
    parts = [MAGIC, struct.pack("<H", VERSION)]
    for section in sections:
        parts.append(struct.pack("<I", len(section)))
        parts.append(section)
    return b"".join(parts)


def parse(data) -> TwoLayerStream:
    """Split a container into its layers, leaving the residual unparsed."""
    r = _Reader(bytes(data))
    if r.take(4, "magic") != MAGIC:
        raise DecodeError("bad container magic", byte_offset=0)
    (version,) = r.unpack("<H", "version")
    if version != VERSION:
        raise DecodeError(f"unsupported container version {version}",
                          byte_offset=4)
    base_start = r.pos + 4
    base = _parse_base(r.lp_bytes("base section"), base_start)
    residual_raw = r.lp_bytes("residual section")
    meta_start = r.pos + 4
    params = _parse_meta(r.lp_bytes("metadata section"), meta_start)
    if r.pos != len(r.data):
        raise DecodeError("trailing bytes after final section",
                          byte_offset=r.pos)
    return TwoLayerStream(base=base, params=params, residual=None,
                          residual_raw=residual_raw)


def residual_layer(stream: TwoLayerStream) -> ResidualCodestream:
    """The parsed residual layer, decoding the raw section if needed."""
    if stream.residual is not None:
        return stream.residual
    if stream.residual_raw is None:
        raise DecodeError("stream has no residual layer")
    return parse_residual_section(stream.residual_raw)
