"""Command-line front end: reduce, inspect, compare.

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 processing error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np
from scipy.optimize import linear_sum_assignment

from .clustering import ClusterConfig
from .colorspace import HslColor, RgbColor, rgb_to_hsl
from .distance import DistanceKind
from .pipeline import (
    ImageFormatError,
    assign,
    build_histogram,
    config_echo,
    load_image,
    reduce_image,
    save_image,
    save_report,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_PROCESSING = 4

_IMAGE_SUFFIXES = (".png", ".ppm")


def _usage_error(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_USAGE


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hslcluster",
        description="Color reduction by fuzzy clustering in HSL space.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("input", help="input image (PNG or P6 PPM)")
    shared.add_argument("-k", type=int, required=True, help="number of clusters")
    shared.add_argument("--omega", type=float, default=1.3, help="fuzzifier in (1, 1.5)")
    shared.add_argument("--max-iters", type=int, default=100)
    shared.add_argument("--tol", type=float, default=1e-5)
    shared.add_argument("--seed", type=int, default=42)

    p_reduce = sub.add_parser("reduce", parents=[shared], help="quantize an image to k colors")
    p_reduce.add_argument(
        "--distance",
        choices=[kind.value for kind in DistanceKind],
        default=DistanceKind.PROPOSED.value,
    )
    p_reduce.add_argument("-o", "--output", required=True, help="output image path")
    p_reduce.add_argument("--report", help="optional JSON report path")

    p_inspect = sub.add_parser("inspect", help="print the HSL coordinates of an RGB color")
    p_inspect.add_argument("--rgb", required=True, metavar="R,G,B", help="8-bit channels")

    p_compare = sub.add_parser(
        "compare", parents=[shared], help="reduce with both distances and report agreement"
    )
    p_compare.add_argument("--out-dir", required=True, help="directory for images and report")
    return parser


def _make_config(args, kind: DistanceKind) -> ClusterConfig:
    return ClusterConfig(
        k=args.k,
        omega=args.omega,
        max_iters=args.max_iters,
        tol=args.tol,
        seed=args.seed,
        distance=kind,
    )


def _load_input(path: str) -> tuple:
    """Returns (Image, None) or (None, exit_code) with a diagnostic printed."""
    try:
        return load_image(path), None
    except ImageFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None, EXIT_PROCESSING
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return None, EXIT_IO


def cmd_reduce(args) -> int:
    try:
        cfg = _make_config(args, DistanceKind(args.distance))
    except ValueError as exc:
        return _usage_error(str(exc))
    if Path(args.output).suffix.lower() not in _IMAGE_SUFFIXES:
        return _usage_error(f"output must end in one of {_IMAGE_SUFFIXES}")

    img, err = _load_input(args.input)
    if err is not None:
        return err
    try:
        reduced, report = reduce_image(img, cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROCESSING
    try:
        save_image(reduced, args.output)
        if args.report:
            save_report(report, args.report)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_inspect(args) -> int:
    parts = args.rgb.split(",")
    if len(parts) != 3:
        return _usage_error(f"--rgb expects three comma-separated 8-bit values, got {args.rgb!r}")
    try:
        channels = [int(p) for p in parts]
        color = RgbColor.from_8bit(*channels)
    except ValueError as exc:
        return _usage_error(str(exc))
    q = rgb_to_hsl(color)
    print(f"H={q.h:.9f}, S={q.s:.9f}, L={q.l:.9f}")
    return EXIT_OK


def _label_agreement(labels_a: np.ndarray, labels_b: np.ndarray, k: int) -> float:
    """Fraction of pixels on which two label maps agree, maximized over
    cluster-index permutations (cluster numbering is arbitrary)."""
    confusion = np.bincount(labels_a * k + labels_b, minlength=k * k).reshape(k, k)
    rows, cols = linear_sum_assignment(confusion, maximize=True)
    return float(confusion[rows, cols].sum() / labels_a.size)


def cmd_compare(args) -> int:
    try:
        configs = {kind: _make_config(args, kind) for kind in DistanceKind}
    except ValueError as exc:
        return _usage_error(str(exc))

    img, err = _load_input(args.input)
    if err is not None:
        return err

    in_path = Path(args.input)
    suffix = in_path.suffix.lower() if in_path.suffix.lower() in _IMAGE_SUFFIXES else ".png"
    out_dir = Path(args.out_dir)

    results = {}
    try:
        histogram = build_histogram(img)
        for kind, cfg in configs.items():
            reduced, report = reduce_image(img, cfg)
            centers = [HslColor(c.h, c.s, c.l) for c in report.clusters]
            labels = assign(img, histogram, centers, kind)
            results[kind] = (reduced, report, labels)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROCESSING

    agreement = _label_agreement(
        results[DistanceKind.PROPOSED][2], results[DistanceKind.EUCLID][2], args.k
    )

    shared_config = config_echo(configs[DistanceKind.PROPOSED])
    del shared_config["distance"]
    combined = {"config": shared_config, "label_agreement": agreement}
    for kind, (_, report, _) in results.items():
        body = report.to_json_dict()
        combined[kind.value] = {
            "iterations": body["iterations"],
            "objective_history": body["objective_history"],
            "clusters": body["clusters"],
        }

    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for kind, (reduced, _, _) in results.items():
            save_image(reduced, out_dir / f"{in_path.stem}_{kind.value}{suffix}")
        report_path = out_dir / f"{in_path.stem}_compare.json"
        report_path.write_text(json.dumps(combined, indent=2) + "\n")
    except OSError as exc:
        print(f"error: cannot write outputs: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command == "reduce":
        return cmd_reduce(args)
    if args.command == "inspect":
        return cmd_inspect(args)
    return cmd_compare(args)


if __name__ == "__main__":
    sys.exit(main())
