import os

import numpy as np
import pytest

from huecodec import synthetic
from huecodec.cli import main
from huecodec.codec import decode_ldr, encode, parse, serialize
from huecodec.hdr_io import load_image, read_ppm, write_pfm
from huecodec.metrics import delta_c, delta_h_mean, hue_reference
from huecodec.tmo import TmoParams


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    directory = tmp_path_factory.mktemp("corpus")
    manifest = synthetic.write_corpus(directory, size=(64, 64))
    return directory, manifest


def _read(path):
    with open(path, "rb") as f:
        return f.read()


def test_tonemap_writes_matching_dimensions(corpus_dir, tmp_path, capsys):
    directory, _ = corpus_dir
    out = tmp_path / "out.ppm"
    rc = main(["tonemap", "--input", str(directory / "ramp.pfm"),
               "--output", str(out), "--operator", "drago"])
    assert rc == 0
    img = read_ppm(_read(out))
    assert img.shape == (64, 64, 3)


def test_tonemap_deterministic(corpus_dir, tmp_path):
    directory, _ = corpus_dir
    a, b = tmp_path / "a.ppm", tmp_path / "b.ppm"
    for out in (a, b):
        assert main(["tonemap", "--input", str(directory / "wheel.pfm"),
                     "--output", str(out)]) == 0
    assert _read(a) == _read(b)


def test_unknown_operator_is_usage_error(corpus_dir, tmp_path):
    directory, _ = corpus_dir
    with pytest.raises(SystemExit) as info:
        main(["tonemap", "--input", str(directory / "ramp.pfm"),
              "--output", str(tmp_path / "x.ppm"), "--operator", "bogus"])
    assert info.value.code == 2


def test_quality_out_of_range_is_usage_error(corpus_dir, tmp_path):
    directory, _ = corpus_dir
    for bad in ("0", "101", "abc"):
        with pytest.raises(SystemExit) as info:
            main(["encode", "--input", str(directory / "ramp.pfm"),
                  "--output", str(tmp_path / "x.hxt"), "--quality", bad])
        assert info.value.code == 2


def test_encode_decode_roundtrip(corpus_dir, tmp_path):
    directory, _ = corpus_dir
    stream_path = tmp_path / "out.hxt"
    assert main(["encode", "--input", str(directory / "patches.pfm"),
                 "--output", str(stream_path), "--quality", "80"]) == 0
    ldr_path = tmp_path / "dec.ppm"
    assert main(["decode", "--input", str(stream_path), "--layer", "ldr",
                 "--output", str(ldr_path)]) == 0
    hdr_path = tmp_path / "dec.pfm"
    assert main(["decode", "--input", str(stream_path), "--layer", "hdr",
                 "--output", str(hdr_path)]) == 0
    assert load_image(hdr_path).shape == (64, 64, 3)

    # file content equals the library path
    stream = parse(_read(stream_path))
    expected = decode_ldr(stream)
    np.testing.assert_array_equal(read_ppm(_read(ldr_path)),
                                  np.round(expected * 255) / 255)


def test_compensate_flag_changes_stream(corpus_dir, tmp_path):
    directory, _ = corpus_dir
    on, off = tmp_path / "on.hxt", tmp_path / "off.hxt"
    assert main(["encode", "--input", str(directory / "wheel.pfm"),
                 "--output", str(on), "--compensate"]) == 0
    assert main(["encode", "--input", str(directory / "wheel.pfm"),
                 "--output", str(off), "--no-compensate"]) == 0
    assert _read(on) != _read(off)


def test_encode_deterministic(corpus_dir, tmp_path):
    directory, _ = corpus_dir
    a, b = tmp_path / "a.hxt", tmp_path / "b.hxt"
    for out in (a, b):
        assert main(["encode", "--input", str(directory / "noise.pfm"),
                     "--output", str(out), "--quality", "70"]) == 0
    assert _read(a) == _read(b)


def test_decode_ldr_survives_residual_garbage(corpus_dir, tmp_path):
    directory, _ = corpus_dir
    hdr = load_image(directory / "sunset.pfm")
    data = serialize(encode(hdr, TmoParams(), 80))
    pos = 6
    length = int.from_bytes(data[pos:pos + 4], "little")
    res_pos = pos + 4 + length + 4
    res_len = int.from_bytes(data[res_pos - 4:res_pos], "little")
    rng = np.random.default_rng(9)
    corrupted = bytearray(data)
    corrupted[res_pos:res_pos + res_len] = bytes(
        rng.integers(0, 256, res_len, dtype=np.uint8))
    garbled = tmp_path / "garbled.hxt"
    garbled.write_bytes(bytes(corrupted))
    out = tmp_path / "dec.ppm"
    assert main(["decode", "--input", str(garbled), "--layer", "ldr",
                 "--output", str(out)]) == 0
    np.testing.assert_array_equal(read_ppm(_read(out)),
                                  np.round(decode_ldr(parse(data)) * 255) / 255)


def test_decode_corrupt_magic_is_runtime_error(tmp_path, capsys):
    bad = tmp_path / "bad.hxt"
    bad.write_bytes(b"JUNKJUNKJUNK")
    rc = main(["decode", "--input", str(bad), "--layer", "ldr",
               "--output", str(tmp_path / "out.ppm")])
    assert rc == 1
    assert "error" in capsys.readouterr().err


def test_metrics_identical_inputs(corpus_dir, tmp_path, capsys):
    directory, _ = corpus_dir
    ldr = np.clip(load_image(directory / "ramp.pfm"), 0.0, 1.0)
    path = tmp_path / "same.pfm"
    path.write_bytes(write_pfm(ldr))
    rc = main(["metrics", "--ldr", str(path), "--hdr", str(path)])
    assert rc == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out[0] == "metric,value"
    values = dict(line.split(",") for line in out[1:])
    assert float(values["delta_c"]) == 0.0
    assert float(values["delta_h"]) == 0.0


def test_metrics_match_library(corpus_dir, tmp_path, capsys):
    directory, _ = corpus_dir
    hdr = load_image(directory / "wheel.pfm")
    stream_path = tmp_path / "s.hxt"
    main(["encode", "--input", str(directory / "wheel.pfm"),
          "--output", str(stream_path)])
    ldr_path = tmp_path / "dec.ppm"
    main(["decode", "--input", str(stream_path), "--layer", "ldr",
          "--output", str(ldr_path)])
    rc = main(["metrics", "--ldr", str(ldr_path), "--hdr",
               str(directory / "wheel.pfm")])
    assert rc == 0
    out = capsys.readouterr().out.strip().splitlines()
    values = dict(line.split(",") for line in out[1:])
    ldr = read_ppm(_read(ldr_path))
    assert float(values["delta_c"]) == pytest.approx(delta_c(ldr, hdr), abs=5e-7)
    assert float(values["delta_h"]) == pytest.approx(
        delta_h_mean(ldr, hue_reference(ldr, hdr)), abs=5e-7)


def test_metrics_dimension_mismatch_is_runtime_error(corpus_dir, tmp_path):
    directory, _ = corpus_dir
    small = np.zeros((8, 8, 3)) + 0.25
    path = tmp_path / "small.pfm"
    path.write_bytes(write_pfm(small))
    rc = main(["metrics", "--ldr", str(path), "--hdr",
               str(directory / "ramp.pfm")])
    assert rc == 1


def test_report_empty_manifest(tmp_path):
    manifest = tmp_path / "empty.txt"
    manifest.write_text("# nothing here\n")
    out_dir = tmp_path / "report"
    rc = main(["report", "--manifest", str(manifest),
               "--output-dir", str(out_dir), "--operators", "drago"])
    assert rc == 0
    rows = (out_dir / "rows.csv").read_text().splitlines()
    assert rows == ["image,tmo,metric,conventional,proposed"]


def test_report_single_image(tmp_path):
    directory = tmp_path / "corpus"
    os.makedirs(directory)
    image_path = directory / "ramp.pfm"
    image_path.write_bytes(write_pfm(synthetic.hue_exposure_ramp((192, 192))))
    manifest = tmp_path / "manifest.txt"
    manifest.write_text(f"{image_path},ramp\n")
    out_dir = tmp_path / "report"
    rc = main(["report", "--manifest", str(manifest),
               "--output-dir", str(out_dir), "--operators", "drago"])
    assert rc == 0
    rows = (out_dir / "rows.csv").read_text().splitlines()
    assert rows[0] == "image,tmo,metric,conventional,proposed"
    metrics_seen = {line.split(",")[2] for line in rows[1:]}
    assert metrics_seen == {"delta_c", "delta_h", "tmqi_q", "tmqi_s",
                            "tmqi_n", "psnr"}
    for name in ("hue_distortion_drago.csv", "tmqi_drago.csv",
                 "ramp_drago_msc_hdr.ppm", "ramp_drago_msc_proposed.ppm",
                 "ramp_drago_deltac_conventional.ppm"):
        assert (out_dir / name).exists()
    # directional: compensation reduces both hue metrics
    table = (out_dir / "hue_distortion_drago.csv").read_text().splitlines()[1]
    _, dc_conv, dc_prop, dh_conv, dh_prop = table.split(",")
    assert float(dc_prop) < float(dc_conv)
    assert float(dh_prop) < float(dh_conv)


def test_report_records_failures(tmp_path):
    manifest = tmp_path / "manifest.txt"
    manifest.write_text("missing_file.pfm,ghost\n")
    out_dir = tmp_path / "report"
    rc = main(["report", "--manifest", str(manifest),
               "--output-dir", str(out_dir), "--operators", "drago"])
    assert rc == 1
    failures = (out_dir / "failures.csv").read_text().splitlines()
    assert len(failures) == 2 and failures[1].startswith("ghost,")
