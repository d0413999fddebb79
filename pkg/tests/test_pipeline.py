import numpy as np
import pytest

from huecodec.codec import (
    RESIDUAL_EPSILON,
    apply_residual,
    compute_residual,
    decode_base,
    decode_hdr,
    decode_ldr,
    decode_residual,
    encode,
    encode_residual,
    inverse_tmo,
    parse,
    serialize,
)
from huecodec.codec.container import MAGIC
from huecodec.codec.pipeline import _dequantize_residual
from huecodec.errors import DecodeError, ParameterError
from huecodec.tmo import (
    TmoParams,
    drago_curve,
    drago_curve_inverse,
    luminance,
    reinhard_curve,
    reinhard_curve_inverse,
    resolve,
    tone_map,
)


# ---------------------------------------------------------------------------
# Inverse tone mapping

def test_reinhard_inverse_examples():
    assert reinhard_curve_inverse(0.5) == pytest.approx(1.0, rel=1e-12)
    assert reinhard_curve_inverse(0.0) == 0.0


def test_reinhard_forward_inverse_identity():
    ls = np.logspace(-4, 3, 2000)
    for l_white in (np.inf, 2.0, 25.0):
        ld = reinhard_curve(ls, l_white)
        keep = ld <= 1.0
        back = reinhard_curve_inverse(ld, l_white)
        rel = np.abs(back[keep] - ls[keep]) / ls[keep]
        assert rel.max() < 1e-6


def test_drago_forward_inverse_identity():
    l_wmax = 80.0
    lw = np.logspace(-4, np.log10(l_wmax), 2000)
    back = drago_curve_inverse(drago_curve(lw, l_wmax), l_wmax)
    rel = np.abs(back - lw) / lw
    assert rel.max() < 1e-4


def test_inverse_tmo_recovers_unclipped_image(small_corpus):
    hdr = small_corpus["noise"]
    params = resolve(TmoParams(operator="reinhard_global"), hdr)
    ldr = tone_map(hdr, params)
    recovered = inverse_tmo(ldr, params)
    # pixels that were not clamped during recombination come back closely
    pre = hdr / luminance(hdr)[..., None]
    unclipped = (pre * reinhard_curve(
        params.key_a * luminance(hdr) / params.l_avg,
        params.l_white)[..., None]).max(axis=-1) < 0.98
    rel = np.abs(recovered - hdr) / np.maximum(hdr, 1e-9)
    assert np.median(rel[unclipped]) < 1e-6


def test_inverse_tmo_requires_resolved_params():
    with pytest.raises(ParameterError):
        inverse_tmo(np.zeros((8, 8, 3)), TmoParams())


# ---------------------------------------------------------------------------
# Residual layer

def test_residual_identical_images_flagged(rng):
    img = rng.random((16, 16, 3)) * 5.0
    codes, r_min, r_max, flags = compute_residual(img, img)
    assert flags.all()
    np.testing.assert_array_equal(r_min, np.zeros(3))
    res = encode_residual(img, img, 90)
    assert all(scan == b"" for scan in res.scans)
    np.testing.assert_array_equal(decode_residual(res), np.zeros(img.shape))


def test_residual_factor_of_four(rng):
    base = rng.uniform(1.0, 50.0, (8, 8, 3))
    codes, r_min, r_max, flags = compute_residual(4.0 * base, base)
    r = _dequantize_residual(codes.astype(float), r_min, r_max)
    np.testing.assert_allclose(r, 2.0, atol=1e-3)


def test_residual_quantization_bound(rng):
    hdr = rng.lognormal(0.0, 2.0, (16, 16, 3))
    recon = rng.lognormal(0.0, 2.0, (16, 16, 3))
    codes, r_min, r_max, flags = compute_residual(hdr, recon)
    r_true = np.log2((hdr + RESIDUAL_EPSILON) / (recon + RESIDUAL_EPSILON))
    r_hat = _dequantize_residual(codes.astype(float), r_min, r_max)
    step = (r_max - r_min) / 255.0
    assert (np.abs(r_hat - r_true) <= step / 2.0 + 1e-12).all()
    rebuilt = apply_residual(recon, r_hat, RESIDUAL_EPSILON)
    ratio_err = np.abs(np.log2((rebuilt + RESIDUAL_EPSILON)
                               / (hdr + RESIDUAL_EPSILON)))
    assert (ratio_err <= step / 2.0 + 1e-12).all()


def test_apply_residual_zero_is_identity(rng):
    img = rng.random((4, 4, 3)) * 3.0
    np.testing.assert_allclose(apply_residual(img, np.zeros_like(img),
                                              RESIDUAL_EPSILON), img,
                               rtol=1e-12, atol=1e-12)


def test_residual_rejects_bad_epsilon(rng):
    img = rng.random((4, 4, 3))
    with pytest.raises(ParameterError):
        compute_residual(img, img, epsilon=0.0)


# ---------------------------------------------------------------------------
# Container

def test_container_roundtrip_identity(small_corpus):
    stream = encode(small_corpus["ramp"], TmoParams(), 80)
    data = serialize(stream)
    assert data[:4] == MAGIC
    assert serialize(parse(data)) == data


def test_container_preserves_params(small_corpus):
    params = TmoParams(operator="drago", key_a=0.25, bias=0.7, gamma=2.0)
    stream = encode(small_corpus["wheel"], params, 60)
    parsed = parse(serialize(stream))
    assert parsed.params.operator == "drago"
    assert parsed.params.key_a == 0.25
    assert parsed.params.bias == 0.7
    assert parsed.params.gamma == 2.0
    assert parsed.params.l_avg == stream.params.l_avg
    assert parsed.params.l_wmax == stream.params.l_wmax


def test_container_bad_magic():
    with pytest.raises(DecodeError):
        parse(b"NOPE" + bytes(32))


def test_container_truncated():
    stream = encode(np.full((8, 8, 3), 0.5) + 0.1, TmoParams(), 80)
    data = serialize(stream)
    with pytest.raises(DecodeError):
        parse(data[: len(data) - 5])


def _section_bounds(data):
    """(start, end) byte ranges of the three container sections."""
    pos = 6
    bounds = []
    for _ in range(3):
        length = int.from_bytes(data[pos:pos + 4], "little")
        bounds.append((pos + 4, pos + 4 + length))
        pos += 4 + length
    return bounds


def test_decode_ldr_ignores_residual_garbage(small_corpus, rng):
    stream = encode(small_corpus["patches"], TmoParams(), 80)
    data = serialize(stream)
    start, end = _section_bounds(data)[1]
    corrupted = bytearray(data)
    corrupted[start:end] = bytes(rng.integers(0, 256, end - start, dtype=np.uint8))
    reference = decode_ldr(parse(data))
    survived = decode_ldr(parse(bytes(corrupted)))
    np.testing.assert_array_equal(survived, reference)
    # but the HDR layer must notice
    with pytest.raises(DecodeError):
        decode_hdr(parse(bytes(corrupted)))


def test_decode_hdr_rejects_dimension_mismatch(small_corpus):
    a = encode(small_corpus["ramp"], TmoParams(), 80)
    b = encode(small_corpus["ramp"][:32], TmoParams(), 80)
    from huecodec.codec.container import TwoLayerStream
    frankenstein = TwoLayerStream(base=a.base, params=a.params,
                                  residual=b.residual)
    with pytest.raises(DecodeError):
        decode_hdr(frankenstein)


# ---------------------------------------------------------------------------
# End-to-end

def test_decode_ldr_equals_base_decode(small_corpus):
    stream = encode(small_corpus["sunset"], TmoParams(), 80)
    np.testing.assert_array_equal(decode_ldr(stream), decode_base(stream.base))


def test_compensation_flag_changes_stream(small_corpus):
    hdr = small_corpus["wheel"]
    with_comp = serialize(encode(hdr, TmoParams(), 80, compensation=True))
    without = serialize(encode(hdr, TmoParams(), 80, compensation=False))
    assert with_comp != without


def test_encode_deterministic(small_corpus):
    hdr = small_corpus["noise"]
    a = serialize(encode(hdr, TmoParams(operator="drago"), 75))
    b = serialize(encode(hdr, TmoParams(operator="drago"), 75))
    assert a == b


def test_zero_residual_stream_decodes_to_inverse_tmo(small_corpus):
    # A residual computed against the base reconstruction itself is
    # identically zero, so decode_hdr must reduce to the inverse-mapped
    # base layer exactly.
    first = encode(small_corpus["ramp"], TmoParams(), 85)
    base_hdr = inverse_tmo(decode_ldr(first), first.params)
    zero_residual = encode_residual(base_hdr, base_hdr, 85)
    assert all(zero_residual.flags)
    from huecodec.codec.container import TwoLayerStream
    stream = TwoLayerStream(base=first.base, params=first.params,
                            residual=zero_residual)
    stream = parse(serialize(stream))
    np.testing.assert_array_equal(decode_hdr(stream), base_hdr)


def test_decode_hdr_monotone_in_residual_codes(small_corpus):
    hdr = small_corpus["patches"]
    stream = encode(hdr, TmoParams(), 80)
    res = stream.residual
    r_lo = decode_residual(res)
    hi = type(res)(width=res.width, height=res.height, quality=res.quality,
                   epsilon=res.epsilon, qtable=res.qtable, flags=res.flags,
                   r_min=tuple(v + 0.5 for v in res.r_min),
                   r_max=tuple(v + 0.5 for v in res.r_max),
                   scans=res.scans)
    r_hi = decode_residual(hi)
    base_hdr = inverse_tmo(decode_ldr(stream), stream.params)
    out_lo = apply_residual(base_hdr, r_lo, res.epsilon)
    out_hi = apply_residual(base_hdr, r_hi, res.epsilon)
    assert (out_hi >= out_lo).all()


def test_base_dimension_metadata_must_match_payload(small_corpus):
    import dataclasses

    stream = encode(small_corpus["ramp"], TmoParams(), 80)
    lying = dataclasses.replace(stream.base, width=stream.base.width + 8)
    with pytest.raises(DecodeError):
        decode_base(lying)


def test_decode_hdr_q100_ramp_accuracy():
    a, b = np.meshgrid(np.linspace(0.1, 4.0, 64), np.linspace(0.2, 2.0, 64),
                       indexing="ij")
    ramp = np.stack([a, b, np.full_like(a, 1.0)], axis=-1)
    recovered = decode_hdr(encode(ramp, TmoParams(), 100))
    rel = np.abs(recovered - ramp) / np.maximum(ramp, 1e-9)
    assert (np.median(rel, axis=(0, 1)) <= 0.01).all()


def test_encode_rejects_bad_inputs(small_corpus):
    with pytest.raises(ParameterError):
        encode(small_corpus["ramp"], TmoParams(), 0)
    with pytest.raises(ParameterError):
        encode(np.full((8, 8, 3), -1.0), TmoParams(), 80)
    with pytest.raises(ParameterError):
        encode(np.zeros((8, 8)), TmoParams(), 80)
