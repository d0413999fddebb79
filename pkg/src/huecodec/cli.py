"""Command-line interface.

    huecodec tonemap  --input scene.hdr --output scene.ppm --operator drago
    huecodec encode   --input scene.hdr --output scene.hxt --quality 80 --compensate
    huecodec decode   --input scene.hxt --layer ldr --output scene.ppm
    huecodec metrics  --ldr scene.ppm --hdr scene.hdr --metrics delta_c,delta_h
    huecodec report   --manifest corpus.txt --output-dir report/

Exit codes: 0 success, 1 runtime or data error, 2 usage error.  Metric
output is CSV on stdout (header ``metric,value``); progress and
human-readable summaries go to stderr.  All commands are deterministic:
the same invocation writes byte-identical outputs.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import codec, hdr_io, metrics
from .errors import HueCodecError
from .hueplane import compensate_image, render_max_sat
from .metrics import delta_c, delta_c_field, delta_h_mean, hue_reference, psnr, tmqi
from .tmo import OPERATORS, TmoParams, resolve, tone_map

HEATMAP_VMAX = 0.5  # fixed scale so heatmaps compare across images

METRIC_NAMES = ("delta_c", "delta_h", "tmqi_q", "tmqi_s", "tmqi_n", "psnr")


def _quality(text):
    try:
        q = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"quality must be an integer: {text!r}")
    if not 1 <= q <= 100:
        raise argparse.ArgumentTypeError("quality must lie in [1, 100]")
    return q


def _positive(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("value must be positive")
    return value


def _add_tmo_args(parser):
    parser.add_argument("--operator", choices=OPERATORS,
                        default="global_photographic")
    parser.add_argument("--key-a", type=_positive, default=0.18,
                        help="exposure key (default 0.18)")
    parser.add_argument("--l-white", type=float, default=math.inf,
                        help="burn-out threshold (default: none)")
    parser.add_argument("--bias", type=float, default=0.85,
                        help="logarithmic-operator bias in (0, 1]")
    parser.add_argument("--saturation", type=float, default=1.0,
                        help="color recombination exponent in (0, 1]")
    parser.add_argument("--gamma", type=_positive, default=2.2,
                        help="display gamma (default 2.2)")


def _params(args) -> TmoParams:
    return TmoParams(operator=args.operator, key_a=args.key_a,
                     l_white=args.l_white, bias=args.bias,
                     saturation=args.saturation, gamma=args.gamma)


def _write_ldr(path, image):
    name = str(path).lower()
    if name.endswith(".pfm"):
        data = hdr_io.write_pfm(image)
    else:
        data = hdr_io.write_ppm(image)
    with open(path, "wb") as f:
        f.write(data)


def cmd_tonemap(args) -> int:
    hdr = hdr_io.load_image(args.input)
    params = resolve(_params(args), hdr)
    print(f"tonemap: operator={params.operator} key_a={params.key_a} "
          f"l_white={params.l_white:g} bias={params.bias} "
          f"saturation={params.saturation} gamma={params.gamma}",
          file=sys.stderr)
    _write_ldr(args.output, tone_map(hdr, params))
    return 0


def cmd_encode(args) -> int:
    hdr = hdr_io.load_image(args.input)
    stream = codec.encode(hdr, _params(args), args.quality,
                          compensation=args.compensate)
    with open(args.output, "wb") as f:
        f.write(codec.serialize(stream))
    return 0


def cmd_decode(args) -> int:
    with open(args.input, "rb") as f:
        stream = codec.parse(f.read())
    if args.layer == "ldr":
        _write_ldr(args.output, codec.decode_ldr(stream))
    else:
        with open(args.output, "wb") as f:
            f.write(hdr_io.write_pfm(codec.decode_hdr(stream)))
    return 0


def _compute_metrics(names, ldr, hdr) -> list:
    rows = []
    for name in names:
        if name == "delta_c":
            rows.append(("delta_c", delta_c(ldr, hdr)))
        elif name == "delta_h":
            rows.append(("delta_h", delta_h_mean(ldr, hue_reference(ldr, hdr))))
        elif name == "tmqi":
            score = tmqi(ldr, hdr)
            rows += [("tmqi_q", score.q), ("tmqi_s", score.s),
                     ("tmqi_n", score.n)]
        elif name == "psnr":
            rows.append(("psnr", psnr(ldr, np.clip(hdr, 0.0, 1.0))))
        else:
            raise HueCodecError(f"unknown metric {name!r}")
    return rows


def cmd_metrics(args) -> int:
    ldr = np.clip(hdr_io.load_image(args.ldr), 0.0, 1.0)
    hdr = hdr_io.load_image(args.hdr)
    names = [n.strip() for n in args.metrics.split(",") if n.strip()]
    rows = _compute_metrics(names, ldr, hdr)
    print("metric,value")
    for name, value in rows:
        print(f"{name},{value:.6f}")
    for name, value in rows:
        print(f"  {name:8s} = {value:.6f}", file=sys.stderr)
    return 0


def _read_manifest(path) -> list:
    entries = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "," in line:
                file_path, name = line.split(",", 1)
            else:
                file_path, name = line, line.rsplit("/", 1)[-1].split(".")[0]
            entries.append((file_path.strip(), name.strip()))
    return entries


def _fmt(value) -> str:
    return f"{value:.6f}"


def cmd_report(args) -> int:
    import os

    os.makedirs(args.output_dir, exist_ok=True)
    operators = [op.strip() for op in args.operators.split(",") if op.strip()]
    for op in operators:
        if op not in OPERATORS:
            raise HueCodecError(f"unknown operator {op!r}")
    entries = _read_manifest(args.manifest)

    rows = []      # (image, tmo, metric, conventional, proposed)
    failures = []  # (image, tmo, message)
    for path, name in entries:
        try:
            hdr = hdr_io.load_image(path)
        except (OSError, HueCodecError) as exc:
            failures.append((name, "*", str(exc)))
            continue
        for op in operators:
            try:
                rows += _report_one(args, hdr, name, op)
            except (OSError, HueCodecError) as exc:
                failures.append((name, op, str(exc)))

    _write_report_tables(args.output_dir, operators, rows)
    with open(os.path.join(args.output_dir, "failures.csv"), "w") as f:
        f.write("image,tmo,error\n")
        for name, op, message in failures:
            f.write(f"{name},{op},{message.replace(chr(10), ' ')}\n")
    print(f"report: {len(rows)} rows, {len(failures)} failures "
          f"-> {args.output_dir}", file=sys.stderr)
    return 1 if failures else 0


def _report_one(args, hdr, name, op) -> list:
    import os

    params = TmoParams(operator=op)
    results = {}
    for compensation in (False, True):
        stream = codec.encode(hdr, params, args.quality,
                              compensation=compensation)
        decoded = codec.decode_ldr(stream)
        resolved = resolve(params, hdr)
        reference_ldr = tone_map(hdr, resolved)
        if compensation:
            reference_ldr = compensate_image(reference_ldr, hdr)
        score = tmqi(decoded, hdr)
        results[compensation] = {
            "delta_c": delta_c(decoded, hdr),
            "delta_h": delta_h_mean(decoded, hue_reference(decoded, hdr)),
            "tmqi_q": score.q,
            "tmqi_s": score.s,
            "tmqi_n": score.n,
            "psnr": psnr(decoded, reference_ldr),
            "_decoded": decoded,
        }

    out = args.output_dir
    vis = [("msc_hdr", render_max_sat(hdr)),
           ("msc_conventional", render_max_sat(results[False]["_decoded"])),
           ("msc_proposed", render_max_sat(results[True]["_decoded"]))]
    for tag, image in vis:
        with open(os.path.join(out, f"{name}_{op}_{tag}.ppm"), "wb") as f:
            f.write(hdr_io.write_ppm(image))
    for tag, compensation in (("conventional", False), ("proposed", True)):
        field = delta_c_field(results[compensation]["_decoded"], hdr)
        path = os.path.join(out, f"{name}_{op}_deltac_{tag}.ppm")
        with open(path, "wb") as f:
            f.write(hdr_io.write_heatmap(field, HEATMAP_VMAX))

    return [(name, op, metric, results[False][metric], results[True][metric])
            for metric in METRIC_NAMES]


def _write_report_tables(output_dir, operators, rows):
    import os

    with open(os.path.join(output_dir, "rows.csv"), "w") as f:
        f.write("image,tmo,metric,conventional,proposed\n")
        for name, op, metric, conv, prop in rows:
            f.write(f"{name},{op},{metric},{_fmt(conv)},{_fmt(prop)}\n")

    for op in operators:
        by_image = {}
        for name, row_op, metric, conv, prop in rows:
            if row_op == op:
                by_image.setdefault(name, {})[metric] = (conv, prop)
        with open(os.path.join(output_dir, f"hue_distortion_{op}.csv"), "w") as f:
            f.write("image,delta_c_conventional,delta_c_proposed,"
                    "delta_h_conventional,delta_h_proposed\n")
            for name, vals in by_image.items():
                dc, dh = vals["delta_c"], vals["delta_h"]
                f.write(f"{name},{_fmt(dc[0])},{_fmt(dc[1])},"
                        f"{_fmt(dh[0])},{_fmt(dh[1])}\n")
        with open(os.path.join(output_dir, f"tmqi_{op}.csv"), "w") as f:
            f.write("image,tmqi_conventional,tmqi_proposed\n")
            for name, vals in by_image.items():
                q = vals["tmqi_q"]
                f.write(f"{name},{_fmt(q[0])},{_fmt(q[1])}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="huecodec",
        description="Two-layer HDR coding with hue compensation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tonemap", help="tone-map an HDR image to LDR")
    p.add_argument("--input", required=True, help=".hdr or .pfm input")
    p.add_argument("--output", required=True, help=".ppm or .pfm output")
    _add_tmo_args(p)
    p.set_defaults(func=cmd_tonemap)

    p = sub.add_parser("encode", help="encode HDR into a two-layer stream")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True, help="container file")
    p.add_argument("--quality", type=_quality, default=80)
    comp = p.add_mutually_exclusive_group()
    comp.add_argument("--compensate", dest="compensate", action="store_true",
                      default=True, help="hue-compensate the base layer "
                      "(default)")
    comp.add_argument("--no-compensate", dest="compensate",
                      action="store_false", help="conventional pipeline")
    _add_tmo_args(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode a two-layer stream")
    p.add_argument("--input", required=True)
    p.add_argument("--layer", choices=("ldr", "hdr"), required=True)
    p.add_argument("--output", required=True,
                   help="ldr -> .ppm/.pfm, hdr -> .pfm")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("metrics", help="score an LDR image against HDR")
    p.add_argument("--ldr", required=True)
    p.add_argument("--hdr", required=True)
    p.add_argument("--metrics", default="delta_c,delta_h",
                   help="comma list from delta_c,delta_h,tmqi,psnr")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("report", help="conventional-vs-proposed report "
                       "over an image corpus")
    p.add_argument("--manifest", required=True,
                   help="text file: one 'path[,name]' per line")
    p.add_argument("--output-dir", required=True)
    p.add_argument("--quality", type=_quality, default=80)
    p.add_argument("--operators", default=",".join(OPERATORS))
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (HueCodecError, OSError) as exc:
        print(f"huecodec: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
