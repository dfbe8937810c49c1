"""Command-line surface for the package.

One executable, subcommand per task: single-image operations (saliency,
foveate, overlay, perturb), training and sweeps, checkpoint evaluation,
report assembly, and curve plotting. Image commands read and write PNG;
saliency can also emit the raw float map as .fpl.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .config import default_config, load_config
from .experiment import (
    alpha_sweep,
    evaluate,
    plot_metrics,
    report_from_json,
    report_table,
    report_to_json,
    train,
)
from .foveation import blend_foveate, heatmap_overlay
from .imaging import read_png, rgb_to_gray, write_fpl, write_png
from .perturb import PerturbCategory, PerturbConfig, frame_rng, perturb_frame
from .saliency import SpectralConfig, spectral_residual


def _as_gray(img: np.ndarray) -> np.ndarray:
    return rgb_to_gray(img) if img.ndim == 3 else img.astype(np.float64)


def _saliency_of(img: np.ndarray, size: int):  # type: ignore[no-untyped-def]
    return spectral_residual(_as_gray(img), SpectralConfig(working_size=size))


def _cmd_saliency(args: argparse.Namespace) -> int:
    img = read_png(args.input)
    smap = _saliency_of(img, args.size)
    if args.output.endswith(".fpl"):
        write_fpl(args.output, smap.data)
    else:
        write_png(args.output, np.rint(smap.data * 255.0).astype(np.uint8))
    return 0


def _cmd_foveate(args: argparse.Namespace) -> int:
    img = read_png(args.input)
    smap = _saliency_of(img, args.size)
    out = blend_foveate(img, smap, args.alpha, literal_additive=args.literal_additive)
    write_png(args.output, out)
    return 0


def _cmd_overlay(args: argparse.Namespace) -> int:
    img = read_png(args.input)
    smap = _saliency_of(img, args.size)
    write_png(args.output, heatmap_overlay(img, smap, args.weight))
    return 0


def _cmd_perturb(args: argparse.Namespace) -> int:
    img = read_png(args.input)
    cat = PerturbCategory.parse(args.category)
    cfg = PerturbConfig(seed=args.seed)
    out = perturb_frame(img, cat, cfg, frame_rng(args.seed, args.frame_index))
    write_png(args.output, out)
    return 0


def _cmd_train(args: argparse.Namespace) -> int:
    cfg = load_config(args.config) if args.config else default_config()
    result = train(cfg, out_dir=args.out)
    print(f"env steps: {result.env_steps}")
    print(f"episodes: {result.episodes_completed}")
    print(f"final mean return (sliding {50}): {result.final_mean_return:.3f}")
    print(f"metrics: {result.metrics_path}")
    print(f"checkpoint: {result.checkpoint_path}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = load_config(args.config) if args.config else default_config()
    alphas = [float(a) for a in args.alphas.split(",") if a.strip()]
    results = alpha_sweep(cfg, alphas, args.out, repeats=args.repeats)
    for alpha, rep, res in results:
        print(f"alpha {alpha:g} rep {rep}: final mean return {res.final_mean_return:.3f}")
    print(f"summary: {Path(args.out) / 'summary.csv'}")
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    cat = PerturbCategory.parse(args.category)
    report = evaluate(
        args.checkpoint,
        cat,
        k=args.games,
        seed=args.seed,
        greedy=args.greedy or None,
    )
    text = report_to_json(report, args.label)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    paths = sorted(Path(args.runs).glob("*.json"))
    if not paths:
        raise ValueError(f"no eval reports (*.json) found under {args.runs}")
    grouped: dict[str, dict[PerturbCategory, object]] = {}
    for path in paths:
        label, rep = report_from_json(path.read_text(encoding="utf-8"))
        grouped.setdefault(label, {})[rep.category] = rep
    text, csv_text = report_table(grouped)  # type: ignore[arg-type]
    Path(args.out).write_text(text, encoding="utf-8")
    Path(args.out + ".csv").write_text(csv_text, encoding="utf-8")
    sys.stdout.write(text)
    return 0


def _cmd_plot(args: argparse.Namespace) -> int:
    labels = args.labels.split(",") if args.labels else None
    plot_metrics(args.csv, args.out, labels=labels)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="foveal",
        description="Saliency-foveated observation preprocessing for a pixel maze agent",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("saliency", help="compute a saliency map for one image")
    p.add_argument("input")
    p.add_argument("output", help="PNG for a gray rendering, .fpl for the raw map")
    p.add_argument("--size", type=int, default=64, help="working size (32, 64, or 128)")
    p.set_defaults(func=_cmd_saliency)

    p = sub.add_parser("foveate", help="blend an image against its saliency map")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--size", type=int, default=64)
    p.add_argument("--literal-additive", action="store_true")
    p.set_defaults(func=_cmd_foveate)

    p = sub.add_parser("overlay", help="overlay a jet heatmap of the saliency map")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--weight", type=float, default=0.5)
    p.add_argument("--size", type=int, default=64)
    p.set_defaults(func=_cmd_overlay)

    p = sub.add_parser("perturb", help="apply one perturbation category to an image")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--category", required=True, help="none, easy, moderate, or difficult")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--frame-index", type=int, default=0)
    p.set_defaults(func=_cmd_perturb)

    p = sub.add_parser("train", help="train an agent in the maze")
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--out", required=True, help="run output directory")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("sweep", help="train once per alpha value")
    p.add_argument("--config")
    p.add_argument("--alphas", required=True, help="comma-separated alphas in [0, 1]")
    p.add_argument("--out", required=True)
    p.add_argument("--repeats", type=int, default=1)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("eval", help="score a checkpoint over k episodes")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--category", required=True)
    p.add_argument("--games", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--greedy", action="store_true", help="argmax actions instead of sampling")
    p.add_argument("--label", default="run", help="agent label used in reports")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("report", help="assemble eval JSONs into a score table")
    p.add_argument("--runs", required=True, help="directory of eval report JSON files")
    p.add_argument("--out", required=True, help="table text path (.csv twin written too)")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("plot", help="render metrics CSVs as an SVG learning curve")
    p.add_argument("--csv", nargs="+", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--labels", help="comma-separated legend labels")
    p.set_defaults(func=_cmd_plot)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return int(args.func(args))
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
