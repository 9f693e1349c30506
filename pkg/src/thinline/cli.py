"""Command-line interface.

Subcommands: detect (one image), batch (score configs over a corpus),
synth (generate a corpus), undistort (flatten one image), report
(pretty-print a CSV report and optionally render its charts).

Exit codes: 0 success, 2 usage or configuration error, 3 file I/O
error, 4 pipeline failure.
"""

import argparse
import csv
import os
import sys

import numpy as np

from .calibration import CAMERA_PRESETS, undistort
from .evaluate import evaluate, read_report, strip_times, write_report
from .figures import render_report_figures
from .imageio import ImageFileError, UnreadableFileError, load_image, \
    save_image, save_rgb
from .pipeline import ConfigError, PipelineStageError, PRESET_STAGES, \
    load_config, named_config, run_pipeline
from .synth import PROFILES, make_corpus

TRUTH_COLUMNS = ("filename", "wire_x", "present")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ImageFileError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except PipelineStageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 4


def main_entry() -> None:
    sys.exit(main())


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thinline",
        description="Detect a thin vertical reference line in images.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="run one pipeline on one image")
    p.add_argument("--image", required=True, help="input PNG or PGM")
    p.add_argument("--config", required=True,
                   help="preset name (GCH/GSCH/GECH/FCH) or a JSON file")
    p.add_argument("--overlay", help="write a PNG with the detection drawn in")
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("batch", help="score configs over an image corpus")
    p.add_argument("--corpus", required=True, help="directory of images")
    p.add_argument("--truth", required=True, help="truth CSV for the corpus")
    p.add_argument("--configs", required=True, nargs="+",
                   help="preset names and/or JSON config files")
    p.add_argument("--out", required=True, help="report CSV to write")
    p.add_argument("--tol", type=float, default=5.0,
                   help="hit tolerance in pixels (default 5)")
    p.add_argument("--jobs", type=int, default=1,
                   help="worker processes (default 1)")
    p.add_argument("--timing", action="store_true",
                   help="keep mean_time_s in the CSV (off by default so "
                        "reruns are byte-identical)")
    p.add_argument("--no-figures", action="store_true",
                   help="skip the charts rendered next to the CSV")
    p.set_defaults(func=_cmd_batch)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("--profile", required=True, choices=sorted(PROFILES),
                   help="scene profile")
    p.add_argument("--n", type=int, required=True, help="number of images")
    p.add_argument("--seed", type=int, default=0, help="corpus seed")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("undistort", help="flatten lens distortion")
    p.add_argument("--image", required=True, help="input PNG or PGM")
    p.add_argument("--camera-preset", required=True,
                   choices=sorted(CAMERA_PRESETS), help="camera model")
    p.add_argument("--out", required=True, help="output image path")
    p.set_defaults(func=_cmd_undistort)

    p = sub.add_parser("report", help="pretty-print a report CSV")
    p.add_argument("--in", dest="path", required=True, help="report CSV")
    p.add_argument("--figures", help="directory to render charts into")
    p.set_defaults(func=_cmd_report)
    return parser


def _resolve_config(spec: str):
    if spec in PRESET_STAGES:
        return named_config(spec)
    if os.path.exists(spec):
        return load_config(spec)
    raise ConfigError(
        f"config {spec!r} is neither a preset "
        f"({', '.join(sorted(PRESET_STAGES))}) nor an existing file"
    )


def _cmd_detect(args) -> int:
    cfg = _resolve_config(args.config)
    img = load_image(args.image)
    result = run_pipeline(cfg, img)
    if result.reference is None:
        print("x_bar=none")
    else:
        print(f"x_bar={result.reference.x_bar:.2f}")
        print(f"support={result.reference.support_count}")
    if args.overlay:
        save_rgb(_draw_overlay(img, result), args.overlay)
    return 0


def _cmd_batch(args) -> int:
    corpus, name = _load_corpus(args.corpus, args.truth)
    configs = [_resolve_config(c) for c in args.configs]
    report = evaluate(configs, corpus, tol=args.tol, corpus_name=name,
                      jobs=args.jobs)
    if not args.timing:
        report = strip_times(report)
    write_report(report, args.out)
    if not args.no_figures:
        base, _ = os.path.splitext(args.out)
        for path in render_report_figures(report, base):
            print(f"wrote {path}")
    print(f"wrote {args.out}")
    return 0


def _cmd_synth(args) -> int:
    if args.n < 0:
        raise ConfigError(f"--n must be >= 0, got {args.n}")
    os.makedirs(args.out, exist_ok=True)
    corpus = make_corpus(args.profile, args.n, args.seed)
    truth_path = os.path.join(args.out, "truth.csv")
    with open(truth_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRUTH_COLUMNS)
        for i, (img, truth) in enumerate(corpus):
            fname = f"img_{i:05d}.png"
            save_image(img, os.path.join(args.out, fname))
            writer.writerow([fname, f"{truth.wire_x:.4f}",
                             int(truth.present)])
    print(f"wrote {len(corpus)} images and {truth_path}")
    return 0


def _cmd_undistort(args) -> int:
    img = load_image(args.image)
    save_image(undistort(img, CAMERA_PRESETS[args.camera_preset]), args.out)
    print(f"wrote {args.out}")
    return 0


def _cmd_report(args) -> int:
    report = read_report(args.path)
    headers = ["config", "corpus", "n", "hits", "rate_pct",
               "mean_abs_err_px", "mean_time_s"]
    rows = [[r.config, r.corpus, str(r.n), str(r.hits),
             f"{r.rate_pct:.2f}",
             "-" if r.mean_abs_err_px is None else f"{r.mean_abs_err_px:.4f}",
             "-" if r.mean_time_s is None else f"{r.mean_time_s:.6f}"]
            for r in sorted(report.rows, key=lambda r: (r.config, r.corpus))]
    widths = [max(len(h), *(len(row[i]) for row in rows)) if rows else len(h)
              for i, h in enumerate(headers)]
    print("  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip())
    for row in rows:
        print("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    if args.figures:
        os.makedirs(args.figures, exist_ok=True)
        stem = os.path.splitext(os.path.basename(args.path))[0]
        for path in render_report_figures(
                report, os.path.join(args.figures, stem)):
            print(f"wrote {path}")
    return 0


def _load_corpus(corpus_dir: str, truth_path: str):
    """Pair every image in the directory with its truth row.

    Any image lacking a truth row, or truth row lacking its image, is an
    error naming the offending file.
    """
    from .synth import GroundTruth

    if not os.path.isdir(corpus_dir):
        raise UnreadableFileError(f"{corpus_dir}: not a directory")
    truth = {}
    with open(truth_path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != list(TRUTH_COLUMNS):
            raise ConfigError(
                f"{truth_path}: expected header {','.join(TRUTH_COLUMNS)}"
            )
        for rec in reader:
            if len(rec) != 3:
                raise ConfigError(f"{truth_path}: malformed row {rec}")
            truth[rec[0]] = GroundTruth(wire_x=float(rec[1]),
                                        present=bool(int(rec[2])))
    images = sorted(f for f in os.listdir(corpus_dir)
                    if f.lower().endswith((".png", ".pgm")))
    missing_truth = [f for f in images if f not in truth]
    if missing_truth:
        raise UnreadableFileError(
            f"{missing_truth[0]}: image has no row in {truth_path}"
        )
    missing_img = sorted(set(truth) - set(images))
    if missing_img:
        raise UnreadableFileError(
            f"{missing_img[0]}: listed in {truth_path} but not found in "
            f"{corpus_dir}"
        )
    corpus = [(load_image(os.path.join(corpus_dir, f)), truth[f])
              for f in images]
    return corpus, os.path.basename(os.path.normpath(corpus_dir))


def _draw_overlay(img, result) -> np.ndarray:
    """Paint detections over the input: segments red, the reference green."""
    h, w = img.shape
    canvas = np.repeat(np.clip(img, 0.0, 1.0)[:, :, None], 3, axis=2)
    for seg in result.segments:
        for x, y in _line_pixels(seg.x1, seg.y1, seg.x2, seg.y2):
            if 0 <= x < w and 0 <= y < h:
                canvas[y, x] = (0.85, 0.1, 0.1)
    if result.reference is not None:
        col = int(round(result.reference.x_bar))
        if 0 <= col < w:
            canvas[:, col] = (0.1, 0.8, 0.2)
    return canvas


def _line_pixels(x1, y1, x2, y2):
    """Integer pixels along a segment (Bresenham)."""
    dx = abs(x2 - x1)
    dy = -abs(y2 - y1)
    sx = 1 if x1 < x2 else -1
    sy = 1 if y1 < y2 else -1
    err = dx + dy
    x, y = x1, y1
    while True:
        yield x, y
        if x == x2 and y == y2:
            return
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x += sx
        if e2 <= dx:
            err += dx
            y += sy
