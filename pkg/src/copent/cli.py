"""Command-line front end.

Subcommands: convert (XPT -> CSV), assoc (CSV -> association matrix),
groups (matrix -> group report), heatmap (matrix -> SVG), synth (spec ->
CSV), fetch (manifest -> downloads; explicit opt-in, never implicit).

Exit codes: 0 success, 1 usage error, 2 data error.  All warnings go to
standard error.  Every run is reproducible by default: randomness flows
only from --seed (default 1, never time-based), so identical argv plus
identical input files produce byte-identical output files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .assoc import (
    ALL_MEASURES,
    association_matrix,
    extract_groups,
    load_matrix,
    matrix_to_csv,
    matrix_to_json,
    report_to_json,
)
from .dataset import ImputePolicy, impute, load_csv, select_columns, write_csv
from .entropy import EstimatorConfig
from .errors import DataError, UsageError
from .heatmap import render_heatmap
from .synth import SynthSpec, generate
from .xpt import fetch_files, parse_xpt_file

DEFAULT_THRESHOLD_CE = 0.1
DEFAULT_THRESHOLD_CLASSICAL = 0.5


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems -> exit code 1, not argparse's 2
        raise UsageError(message)


def _default_jobs() -> int:
    env = os.environ.get("COPENT_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"COPENT_JOBS must be an integer, got {env!r}")
    return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="copent",
        description="Association discovery via copula entropy and classical "
                    "correlation measures.",
    )
    sub = parser.add_subparsers(dest="command", required=True,
                              parser_class=_Parser)

    p = sub.add_parser("convert",
                       help="convert a SAS XPORT v5 file to CSV")
    p.add_argument("--xpt", required=True, help="input .xpt file")
    p.add_argument("--out", required=True, help="output .csv file")

    p = sub.add_parser(
        "assoc",
        help="compute a pairwise association matrix from a CSV",
        epilog="--columns selects before imputation (imputation means are "
               "computed on the selected subset).",
    )
    p.add_argument("--input", required=True, help="input CSV")
    p.add_argument("--output", required=True, help="output matrix file")
    p.add_argument("--measure", required=True, choices=ALL_MEASURES)
    p.add_argument("--k", type=int, default=None,
                   help="nearest-neighbour order for ce (default 3)")
    p.add_argument("--impute", default="mean", choices=ImputePolicy.KINDS)
    p.add_argument("--columns", default=None,
                   help="comma-separated names / 1-based indices / inclusive "
                        "ranges, e.g. 'age,3,288-302'")
    p.add_argument("--seed", type=int, default=None,
                   help="jitter seed for ce (default 1)")
    p.add_argument("--json", action="store_true",
                   help="write the JSON matrix format instead of CSV")
    p.add_argument("--jobs", type=int, default=None,
                   help="parallel pair workers (default: COPENT_JOBS or "
                        "machine parallelism)")

    p = sub.add_parser("groups",
                       help="extract associated-variable groups from a matrix")
    p.add_argument("--matrix", required=True, help="matrix CSV or JSON")
    p.add_argument("--threshold", type=float, default=None,
                   help="edge threshold (default 0.1 for ce, 0.5 for "
                        "classical measures)")
    p.add_argument("--measure", default=None, choices=ALL_MEASURES,
                   help="measure of a CSV matrix (CSV carries no metadata; "
                        "default ce)")
    p.add_argument("--output", required=True, help="output JSON report")

    p = sub.add_parser("heatmap",
                       help="render a matrix as an SVG heatmap")
    p.add_argument("--matrix", required=True, help="matrix CSV or JSON")
    p.add_argument("--out", required=True, help="output SVG file")
    p.add_argument("--mask-diagonal", action=argparse.BooleanOptionalAction,
                   default=True, help="render the diagonal as masked cells")
    p.add_argument("--clamp-nonneg", action="store_true",
                   help="clamp negative values to 0 for the color scale")
    p.add_argument("--measure", default=None, choices=ALL_MEASURES,
                   help="measure of a CSV matrix (for the title; default ce)")

    p = sub.add_parser("synth",
                       help="generate a synthetic dataset from a JSON spec")
    p.add_argument("--spec", required=True,
                   help="JSON, e.g. '{\"kind\": \"gaussian_pair\", \"rho\": 0.5, "
                        "\"n_rows\": 1000, \"seed\": 1}'")
    p.add_argument("--out", required=True, help="output CSV")

    p = sub.add_parser("fetch",
                       help="download files from a manifest (one URL per line)")
    p.add_argument("--manifest", required=True)
    p.add_argument("--dest", required=True)
    p.add_argument("--jobs", type=int, default=4,
                   help="concurrent downloads (default 4)")
    return parser


def _cmd_convert(args) -> int:
    result = parse_xpt_file(args.xpt)
    for w in result.warnings:
        print(f"warning: {w}", file=sys.stderr)
    write_csv(result.dataset, args.out)
    return 0


def _split_columns(spec: str) -> list[str]:
    items = [s.strip() for s in spec.split(",")]
    return [s for s in items if s]


def _cmd_assoc(args) -> int:
    if args.measure != "ce":
        if args.k is not None:
            raise UsageError("--k only applies to --measure ce")
        if args.seed is not None:
            raise UsageError("--seed only applies to --measure ce")
    cfg = EstimatorConfig(
        k=args.k if args.k is not None else 3,
        jitter_seed=args.seed if args.seed is not None else 1,
    )
    ds = load_csv(args.input)
    if args.columns:
        ds = select_columns(ds, _split_columns(args.columns))
    ds = impute(ds, ImputePolicy(args.impute))
    if args.measure == "ce" and cfg.k >= ds.n_rows:
        raise UsageError("k must be < number of rows")
    jobs = args.jobs if args.jobs is not None else _default_jobs()
    m = association_matrix(ds, args.measure, cfg, jobs=max(1, jobs))
    for w in m.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if args.json:
        matrix_to_json(m, args.output)
    else:
        matrix_to_csv(m, args.output)
    return 0


def _cmd_groups(args) -> int:
    m = load_matrix(args.matrix, measure=args.measure or "ce")
    threshold = args.threshold
    if threshold is None:
        threshold = (DEFAULT_THRESHOLD_CE if m.measure == "ce"
                     else DEFAULT_THRESHOLD_CLASSICAL)
    report = extract_groups(m, threshold)
    report_to_json(report, args.output)
    return 0


def _cmd_heatmap(args) -> int:
    m = load_matrix(args.matrix, measure=args.measure or "ce")
    svg = render_heatmap(
        m, mask_diagonal=args.mask_diagonal, clamp_nonneg=args.clamp_nonneg
    )
    Path(args.out).write_text(svg, encoding="utf-8")
    return 0


def _cmd_synth(args) -> int:
    try:
        doc = json.loads(args.spec)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--spec is not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise UsageError("--spec must be a JSON object")
    ds = generate(SynthSpec.from_json(doc))
    write_csv(ds, args.out)
    return 0


def _cmd_fetch(args) -> int:
    manifest = Path(args.manifest)
    if not manifest.exists():
        raise DataError(f"manifest not found: {manifest}")
    urls = [
        line.strip()
        for line in manifest.read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.strip().startswith("#")
    ]
    report = fetch_files(urls, args.dest, parallelism=max(1, args.jobs))
    for url, message in report.errors:
        print(f"warning: fetch failed for {url}: {message}", file=sys.stderr)
    for o in report.outcomes:
        if o.path is not None:
            state = "exists" if o.skipped else "fetched"
            print(f"{state}\t{o.path}")
    return 2 if report.errors else 0


_COMMANDS = {
    "convert": _cmd_convert,
    "assoc": _cmd_assoc,
    "groups": _cmd_groups,
    "heatmap": _cmd_heatmap,
    "synth": _cmd_synth,
    "fetch": _cmd_fetch,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())
