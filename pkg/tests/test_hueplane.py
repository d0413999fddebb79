import numpy as np
import pytest

from huecodec.errors import ParameterError
from huecodec.hueplane import (
    HueCoords,
    compensate_image,
    compensate_pixel,
    hue_coords,
    is_chromatic,
    max_sat_color,
    recompose,
    render_max_sat,
)


def test_hue_coords_worked_example():
    coords = hue_coords(np.array([0.8, 0.5, 0.2]))
    assert coords.a_w == pytest.approx(0.2, abs=1e-15)
    assert coords.a_c == pytest.approx(0.6, abs=1e-15)
    assert coords.a_k == pytest.approx(0.2, abs=1e-15)


def test_hue_coords_vertices():
    white = hue_coords(np.ones(3))
    assert (white.a_w, white.a_c, white.a_k) == (1.0, 0.0, 0.0)
    black = hue_coords(np.zeros(3))
    assert (black.a_w, black.a_c, black.a_k) == (0.0, 0.0, 1.0)


def test_hue_coords_rejects_out_of_range():
    with pytest.raises(ParameterError):
        hue_coords(np.array([1.2, 0.0, 0.0]))
    with pytest.raises(ParameterError):
        hue_coords(np.array([-0.1, 0.0, 0.0]))


def test_max_sat_color_examples():
    np.testing.assert_allclose(max_sat_color(np.array([0.8, 0.5, 0.2])),
                               [1.0, 0.5, 0.0], atol=1e-15)
    np.testing.assert_allclose(max_sat_color(np.array([7.0, 3.0, 1.0])),
                               [1.0, 1.0 / 3.0, 0.0], atol=1e-15)
    assert np.isnan(max_sat_color(np.array([0.4, 0.4, 0.4]))).all()


def test_max_sat_color_extremes_exact(rng):
    x = rng.random((1000, 3))
    c = x[is_chromatic(max_sat_color(x))]
    msc = max_sat_color(c)
    assert (msc.max(axis=-1) == 1.0).all()
    assert (msc.min(axis=-1) == 0.0).all()


def test_max_sat_color_rejects_bad_input():
    with pytest.raises(ParameterError):
        max_sat_color(np.array([-1.0, 0.0, 0.0]))
    with pytest.raises(ParameterError):
        max_sat_color(np.array([np.inf, 0.0, 0.0]))


def test_recompose_examples():
    coords = HueCoords(a_w=np.float64(0.2), a_k=np.float64(0.2),
                       a_c=np.float64(0.6))
    np.testing.assert_allclose(recompose(coords, np.array([1.0, 0.5, 0.0])),
                               [0.8, 0.5, 0.2], atol=1e-15)
    white = HueCoords(np.float64(1.0), np.float64(0.0), np.float64(0.0))
    np.testing.assert_allclose(recompose(white, np.array([1.0, 0.0, 0.0])),
                               [1.0, 1.0, 1.0])
    pure = HueCoords(np.float64(0.0), np.float64(0.0), np.float64(1.0))
    np.testing.assert_allclose(recompose(pure, np.array([1.0, 0.0, 0.0])),
                               [1.0, 0.0, 0.0])


def test_recompose_inconsistency_error():
    coords = HueCoords(np.float64(0.2), np.float64(0.2), np.float64(0.6))
    with pytest.raises(ParameterError):
        recompose(coords, np.array([np.nan, np.nan, np.nan]))


def test_recompose_gray_tolerates_achromatic_c():
    coords = HueCoords(np.float64(0.4), np.float64(0.6), np.float64(0.0))
    out = recompose(coords, np.array([np.nan, np.nan, np.nan]))
    np.testing.assert_allclose(out, [0.4, 0.4, 0.4])


def test_decompose_recompose_identity_lattice():
    axis = np.linspace(0.0, 1.0, 32)
    r, g, b = np.meshgrid(axis, axis, axis, indexing="ij")
    x = np.stack([r, g, b], axis=-1).reshape(-1, 3)
    rebuilt = recompose(hue_coords(x), max_sat_color(x))
    assert np.abs(rebuilt - x).max() < 1e-12


def test_decompose_recompose_identity_random(rng):
    x = rng.random((100_000, 3))
    rebuilt = recompose(hue_coords(x), max_sat_color(x))
    assert np.abs(rebuilt - x).max() < 1e-12


def test_barycentric_constraints(rng):
    x = rng.random((100_000, 3))
    coords = hue_coords(x)
    total = coords.a_w + coords.a_k + coords.a_c
    assert np.abs(total - 1.0).max() < 1e-12
    for part in coords:
        assert part.min() >= 0.0 and part.max() <= 1.0


def test_compensate_pixel_examples():
    out = compensate_pixel(np.array([0.8, 0.5, 0.2]),
                           np.array([5.0, 1.0, 1.0]))
    np.testing.assert_allclose(out, [0.8, 0.2, 0.2], atol=1e-15)
    gray = np.array([0.4, 0.4, 0.4])
    np.testing.assert_array_equal(compensate_pixel(gray, np.array([9.0, 3.0, 1.0])),
                                  gray)
    chroma = np.array([0.9, 0.5, 0.1])
    np.testing.assert_array_equal(compensate_pixel(chroma, np.array([2.0, 2.0, 2.0])),
                                  chroma)


def test_compensate_hue_transfer_exact(rng):
    ldr = rng.random((20_000, 3))
    hdr = rng.random((20_000, 3)) * rng.lognormal(0.0, 2.0, (20_000, 1))
    c_hdr = max_sat_color(hdr)
    keep = is_chromatic(max_sat_color(ldr)) & is_chromatic(c_hdr)
    out = compensate_pixel(ldr[keep], hdr[keep])
    c_out = max_sat_color(out)
    c_ref = c_hdr[keep]
    assert np.array_equal(c_out == 1.0, c_ref == 1.0)
    assert np.array_equal(c_out == 0.0, c_ref == 0.0)
    assert np.abs(c_out - c_ref).max() < 1e-12


def test_compensate_preserves_min_max(rng):
    ldr = rng.random((10_000, 3))
    hdr = rng.random((10_000, 3)) * 20.0
    coords = hue_coords(ldr)
    keep = is_chromatic(max_sat_color(hdr))
    out = compensate_pixel(ldr, hdr)[keep]
    assert np.array_equal(out.min(axis=-1), coords.a_w[keep])
    assert np.array_equal(out.max(axis=-1), (coords.a_w + coords.a_c)[keep])


def test_compensate_idempotent(rng):
    ldr = rng.random((5_000, 3))
    hdr = rng.random((5_000, 3)) * 10.0
    once = compensate_pixel(ldr, hdr)
    twice = compensate_pixel(once, hdr)
    assert np.abs(twice - once).max() < 1e-12


def test_compensate_image_matches_per_pixel(rng):
    ldr = rng.random((2, 1, 3))
    hdr = rng.random((2, 1, 3)) * 5.0
    whole = compensate_image(ldr, hdr)
    for i in range(2):
        np.testing.assert_array_equal(whole[i, 0],
                                      compensate_pixel(ldr[i, 0], hdr[i, 0]))


def test_compensate_image_identity_when_hues_match(rng):
    ldr = rng.random((8, 8, 3))
    scale = rng.uniform(0.5, 50.0, (8, 8, 1))
    out = compensate_image(ldr, ldr * scale)  # same hue plane per pixel
    assert np.abs(out - ldr).max() < 1e-12


def test_compensate_channel_order_follows_hdr(rng):
    # Output min/max channel positions must follow the HDR saturation.
    axis = np.linspace(0.0, 1.0, 8)
    r, g, b = np.meshgrid(axis, axis, axis, indexing="ij")
    ldr = np.stack([r, g, b], axis=-1).reshape(-1, 3)
    hdr = rng.random(ldr.shape) * 10.0
    c_hdr = max_sat_color(hdr)
    keep = is_chromatic(max_sat_color(ldr)) & is_chromatic(c_hdr)
    out = compensate_pixel(ldr, hdr)
    am = np.argmax(c_hdr[keep], axis=-1)
    assert np.array_equal(np.argmax(out[keep], axis=-1), am)


def test_compensate_image_dimension_mismatch():
    with pytest.raises(ParameterError):
        compensate_image(np.zeros((4, 4, 3)), np.zeros((4, 5, 3)))


def test_render_max_sat_gray_fill():
    img = np.array([[[0.3, 0.3, 0.3], [0.9, 0.3, 0.0]]])
    out = render_max_sat(img)
    np.testing.assert_allclose(out[0, 0], [0.5, 0.5, 0.5])
    np.testing.assert_allclose(out[0, 1], [1.0, 1.0 / 3.0, 0.0])
