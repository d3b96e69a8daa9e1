"""dotcodec command line: encode, metrics, decode, eval, synth, bench, export-png.

Every output artifact is reproducible: encode and synth drop a sidecar
manifest with the resolved parameters, and bench writes a manifest that
can be fed straight back to ``dotcodec bench``.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .bench import load_config, run_benchmark
from .decode import DecodeSpec, THRESHOLD_MODES, count_by_integration, detect_local_maxima
from .encoders import CodingSpec, NORMALIZATIONS, encode
from .evaluate import DATASET_MATCH_RADIUS, score
from .io import (export_png, fmt_value, read_centers_csv, read_field,
                 write_centers_csv, write_field, write_manifest)
from .metrics import coding_quality
from .synth import SceneSpec, generate_scene

CLI_SCHEMES = {"dot": "dot", "gaussian": "gaussian", "rect": "rectangle",
               "proximity": "proximity", "repel": "repel"}


def _run_section(subcommand: str, **paths) -> dict:
    section = {"tool": "dotcodec", "version": __version__, "subcommand": subcommand}
    section.update(paths)
    return section


def _cmd_encode(args) -> int:
    labels = read_centers_csv(args.input, args.height, args.width)
    spec = CodingSpec(scheme=CLI_SCHEMES[args.scheme], alpha=args.alpha,
                      radius_cutoff=args.radius, sigma=args.sigma,
                      kernel_size=args.kernel_size, normalization=args.norm)
    write_field(args.output, encode(labels, spec))
    write_manifest(str(args.output) + ".manifest", {
        "run": _run_section("encode", input=args.input, output=args.output),
        "coding": {"scheme": spec.scheme, "alpha": spec.alpha,
                   "radius_cutoff": spec.radius_cutoff, "sigma": spec.sigma,
                   "kernel_size": spec.kernel_size,
                   "normalization": spec.normalization,
                   "height": args.height, "width": args.width},
    })
    return 0


def _cmd_metrics(args) -> int:
    lines = ["scheme,entropy_bits,R,R5,bin_count"]
    for field_path in args.fields:
        field = read_field(field_path)
        labels = read_centers_csv(args.labels, *field.shape)
        quality = coding_quality(field, labels, bin_count=args.bins,
                                 dilation_diameter=args.dilate)
        name = Path(field_path).stem
        lines.append(",".join([name, fmt_value(quality.entropy_bits),
                               fmt_value(quality.reversibility),
                               fmt_value(quality.reversibility_dilated),
                               str(quality.bin_count)]))
    _emit(lines, args.output)
    return 0


def _cmd_decode(args) -> int:
    field = read_field(args.input)
    if args.count:
        print(fmt_value(count_by_integration(field)))
        return 0
    if args.output is None:
        raise ValueError("decode needs -o OUT.csv (or --count)")
    spec = DecodeSpec(nms_radius=args.nms_radius,
                      threshold_mode=args.threshold_mode, threshold=args.threshold)
    write_centers_csv(args.output, detect_local_maxima(field, spec))
    return 0


def _cmd_eval(args) -> int:
    if (args.threshold is None) == (args.dataset is None):
        raise ValueError("eval needs exactly one of --threshold or --dataset")
    threshold = args.threshold if args.threshold is not None \
        else DATASET_MATCH_RADIUS[args.dataset]
    detections = read_centers_csv(args.detections)
    truth = read_centers_csv(args.truth)
    report = score(detections, truth, threshold)
    lines = ["precision,recall,f1,f1_paper_literal,n_det,n_gt,threshold",
             ",".join([fmt_value(report.precision), fmt_value(report.recall),
                       fmt_value(report.f1_standard), fmt_value(report.f1_paper_literal),
                       str(report.n_detections), str(report.n_ground_truth),
                       fmt_value(report.threshold)])]
    _emit(lines, args.output)
    return 0


def _cmd_synth(args) -> int:
    spec = SceneSpec(height=args.height, width=args.width, n_cells=args.n_cells,
                     min_spacing=args.min_spacing,
                     crowded_fraction=args.crowded_fraction,
                     cell_radius=args.cell_radius, seed=args.seed)
    write_centers_csv(args.output, generate_scene(spec))
    write_manifest(str(args.output) + ".manifest", {
        "run": _run_section("synth", output=args.output),
        "scene": {"height": spec.height, "width": spec.width,
                  "n_cells": spec.n_cells, "min_spacing": spec.min_spacing,
                  "crowded_fraction": spec.crowded_fraction,
                  "cell_radius": spec.cell_radius, "seed": spec.seed},
    })
    return 0


def _cmd_bench(args) -> int:
    run_benchmark(load_config(args.config), args.output)
    return 0


def _cmd_export_png(args) -> int:
    export_png(args.output, read_field(args.input))
    return 0


def _emit(lines: list[str], output) -> None:
    text = "\n".join(lines) + "\n"
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dotcodec",
                                     description="Code cell-center dot labels, score codings, invert maps, evaluate detections.")
    parser.add_argument("--version", action="version", version=f"dotcodec {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    enc = sub.add_parser("encode", help="encode a center CSV into an SFLD target map")
    enc.add_argument("input", help="center CSV (row,col header)")
    enc.add_argument("--scheme", required=True, choices=sorted(CLI_SCHEMES))
    enc.add_argument("--height", type=int, required=True)
    enc.add_argument("--width", type=int, required=True)
    enc.add_argument("--alpha", type=float, default=0.8)
    enc.add_argument("--radius", type=float, default=16.0, help="proximity/repel cutoff radius")
    enc.add_argument("--sigma", type=float, default=4.0)
    enc.add_argument("--kernel-size", type=int, default=17)
    enc.add_argument("--norm", choices=NORMALIZATIONS, default="unit_mass")
    enc.add_argument("-o", "--output", required=True, help="output SFLD path")
    enc.set_defaults(func=_cmd_encode)

    met = sub.add_parser("metrics", help="entropy and reversibility of coded maps")
    met.add_argument("fields", nargs="+", help="SFLD files, one CSV row each")
    met.add_argument("--labels", required=True, help="center CSV of the true labels")
    met.add_argument("--bins", type=int, default=8)
    met.add_argument("--dilate", type=float, default=5.0, help="dilation diameter for R5")
    met.add_argument("-o", "--output", help="write CSV here instead of stdout")
    met.set_defaults(func=_cmd_metrics)

    dec = sub.add_parser("decode", help="recover centers (or a count) from an SFLD map")
    dec.add_argument("input", help="SFLD file")
    dec.add_argument("--nms-radius", type=float, default=8.0)
    dec.add_argument("--threshold", type=float, default=0.1)
    dec.add_argument("--threshold-mode", choices=THRESHOLD_MODES, default="relative_to_max")
    dec.add_argument("--count", action="store_true", help="print the integration count instead")
    dec.add_argument("-o", "--output", help="output center CSV")
    dec.set_defaults(func=_cmd_decode)

    evl = sub.add_parser("eval", help="score detected centers against ground truth")
    evl.add_argument("detections", help="detected center CSV")
    evl.add_argument("truth", help="ground-truth center CSV")
    evl.add_argument("--threshold", type=float, help="match distance threshold in pixels")
    evl.add_argument("--dataset", choices=sorted(DATASET_MATCH_RADIUS),
                     help="use this dataset's average cell radius as threshold")
    evl.add_argument("-o", "--output", help="write CSV here instead of stdout")
    evl.set_defaults(func=_cmd_eval)

    syn = sub.add_parser("synth", help="generate a synthetic scene CSV plus manifest")
    syn.add_argument("--height", type=int, default=128)
    syn.add_argument("--width", type=int, default=128)
    syn.add_argument("--n-cells", type=int, default=25)
    syn.add_argument("--min-spacing", type=float, default=4.0)
    syn.add_argument("--crowded-fraction", type=float, default=0.0)
    syn.add_argument("--cell-radius", type=float, default=8.0)
    syn.add_argument("--seed", type=int, default=0)
    syn.add_argument("-o", "--output", required=True, help="output center CSV")
    syn.set_defaults(func=_cmd_synth)

    ben = sub.add_parser("bench", help="run the encode/perturb/decode/score sweep")
    ben.add_argument("config", help="benchmark config (or manifest of a previous run)")
    ben.add_argument("-o", "--output", required=True, help="output directory")
    ben.set_defaults(func=_cmd_bench)

    png = sub.add_parser("export-png", help="16-bit grayscale render of an SFLD map")
    png.add_argument("input", help="SFLD file")
    png.add_argument("-o", "--output", required=True, help="output PNG path")
    png.set_defaults(func=_cmd_export_png)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
