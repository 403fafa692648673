#!/usr/bin/env python3
"""End-to-end real-data workflow: fetch XPT files from a manifest (opt-in),
convert them to CSV, and build association matrices plus heatmaps on a
column slice.

The manifest lists one entry per line: either an URL (downloaded into
--dest) or a local .xpt path.  Nothing is fetched unless URLs appear in the
manifest.  Example:

    python3 scripts/nhanes_pipeline.py --manifest lab_files.txt \
        --dest downloads/ --columns 2-31 --measures ce,spearman --outdir out/
"""

import argparse
import sys
from pathlib import Path

from copent.assoc import association_matrix, extract_groups, matrix_to_csv, report_to_json
from copent.dataset import ImputePolicy, impute, select_columns, write_csv
from copent.entropy import EstimatorConfig
from copent.heatmap import render_heatmap
from copent.xpt import fetch_files, parse_xpt_file

CE_THRESHOLD = 0.1
CLASSICAL_THRESHOLD = 0.5


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--manifest", required=True)
    parser.add_argument("--dest", default="downloads")
    parser.add_argument("--outdir", default="nhanes_out")
    parser.add_argument("--columns", default=None,
                        help="selection applied to each converted file, "
                             "e.g. '2-31' (1-based inclusive)")
    parser.add_argument("--measures", default="ce,pearson")
    parser.add_argument("--k", type=int, default=3)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    lines = [
        ln.strip() for ln in Path(args.manifest).read_text().splitlines()
        if ln.strip() and not ln.strip().startswith("#")
    ]
    urls = [ln for ln in lines if ln.startswith(("http://", "https://"))]
    paths = [Path(ln) for ln in lines if not ln.startswith(("http://", "https://"))]
    if urls:
        report = fetch_files(urls, args.dest)
        for url, message in report.errors:
            print(f"warning: {url}: {message}", file=sys.stderr)
        paths.extend(report.paths)
    if not paths:
        print("error: manifest yielded no files", file=sys.stderr)
        return 2

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    cfg = EstimatorConfig(k=args.k, jitter_seed=args.seed)
    for path in paths:
        result = parse_xpt_file(path)
        for w in result.warnings:
            print(f"warning: {path.name}: {w}", file=sys.stderr)
        ds = result.dataset
        stem = outdir / path.stem
        write_csv(ds, stem.with_suffix(".csv"))
        if args.columns:
            ds = select_columns(ds, [s for s in args.columns.split(",") if s])
        ds = impute(ds, ImputePolicy("mean"))
        for measure in args.measures.split(","):
            m = association_matrix(ds, measure, cfg)
            matrix_path = outdir / f"{path.stem}_{measure}.csv"
            matrix_to_csv(m, matrix_path)
            (outdir / f"{path.stem}_{measure}.svg").write_text(
                render_heatmap(m, clamp_nonneg=(measure == "ce")),
                encoding="utf-8",
            )
            threshold = CE_THRESHOLD if measure == "ce" else CLASSICAL_THRESHOLD
            report_to_json(extract_groups(m, threshold),
                           outdir / f"{path.stem}_{measure}.groups.json")
            print(f"{path.name}: {measure} matrix {m.n_cols}x{m.n_cols} "
                  f"-> {matrix_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
