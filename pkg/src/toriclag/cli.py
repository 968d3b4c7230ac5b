"""Command-line front end: ``toriclag VERB [options]``."""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from toriclag import io
from toriclag.report import GROUPS, PipelineConfig, Tolerances, run_pipeline
from toriclag.svg import gluing_svg, slice_svg

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _global_flags(p: argparse.ArgumentParser, suppress: bool):
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--tol", type=float, default=d, help="use one tolerance for every numeric check")
    p.add_argument("--step", type=float, default=d, help="RK4 step for the shrinker ODE (default 1e-3)")
    p.add_argument("--out", default=d, help="directory for JSON report, CSV and SVG files")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toriclag", description=__doc__)
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name, help_, spec="required"):
        p = sub.add_parser(name, help=help_)
        _global_flags(p, suppress=True)
        if spec == "required":
            p.add_argument("spec", help="cone-spec JSON file")
        elif spec == "optional":
            p.add_argument("spec", nargs="?", help="cone-spec JSON file (default: flat C^3)")
        return p

    verb("check", "validity, goodness, Calabi-Yau element, Reeb admissibility").add_argument(
        "--all", action="store_true", help="run every check")
    verb("slice", "slice assumptions and the slice polygon")
    verb("topology", "glued surface: Euler characteristic, orientability, genus")
    verb("slag", "special Lagrangian conservation along the profile")
    verb("shrinker", "integrate the shrinker ODE; writes trajectory.csv with --out")
    verb("oracle", "finite-difference checks in flat C^m", spec="optional")
    ex = verb("example", "print the cone-spec of a built-in example", spec=None)
    g = ex.add_mutually_exclusive_group(required=True)
    g.add_argument("--genus", type=int, help="genus of the slice surface (>= 1)")
    g.add_argument("--flat", type=int, metavar="M", help="the cone of flat C^M")
    verb("svg", "slice polygon and gluing diagram (files with --out, else slice to stdout)")
    return parser


def _config(args) -> PipelineConfig:
    tol = Tolerances()
    if args.tol is not None:
        if not args.tol > 0:
            raise io.DocumentError("--tol must be positive")
        tol = tol.uniform(args.tol)
    if args.step is not None and not args.step > 0:
        raise io.DocumentError("--step must be positive")
    return PipelineConfig(tol=tol, ode_step=args.step or 1e-3)


def _write(out_dir: str, name: str, text: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def _load(spec) -> io.ConeSpecDocument:
    # structural errors are fatal; an invalid cone is reported by the validity check
    return io.load(spec, validate=False)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except (io.DocumentError, OSError) as exc:
        print(f"toriclag: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _dispatch(args) -> int:
    out = args.out
    if args.verb == "example":
        if args.genus is not None:
            doc, name = io.generate_example(args.genus), f"example_genus{args.genus}.json"
        else:
            doc, name = io.flat_example(args.flat), f"example_flat{args.flat}.json"
        text = io.serialize(doc)
        if out:
            print(_write(out, name, text))
        else:
            sys.stdout.write(text)
        return EXIT_OK

    cfg = _config(args)
    doc = _load(args.spec) if getattr(args, "spec", None) else io.flat_example(3)

    if args.verb == "svg":
        report = run_pipeline(doc, GROUPS["topology"], cfg)
        if "slice" not in report.context:
            sys.stdout.write(report.to_text())
            print("toriclag: error: no slice polygon to draw", file=sys.stderr)
            return EXIT_FAIL
        poly = report.context["slice"]
        if out:
            print(_write(out, "slice.svg", slice_svg(poly)))
            if "surface" in report.context:
                print(_write(out, "gluing.svg", gluing_svg(poly, report.context["surface"])))
        else:
            sys.stdout.write(slice_svg(poly))
        return EXIT_OK

    if args.verb == "check" and args.all:
        which = None
    else:
        which = GROUPS[args.verb]
    report = run_pipeline(doc, which, cfg)
    sys.stdout.write(report.to_text())
    if out:
        _write(out, "report.json", report.to_json())
        _write(out, "report.txt", report.to_text())
        traj = report.context.get("trajectory")
        if traj is not None:
            _write(out, "trajectory.csv", traj.to_csv())
    return EXIT_OK if report.ok else EXIT_FAIL
