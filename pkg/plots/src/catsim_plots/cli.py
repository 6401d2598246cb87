"""Command-line figure builder.

``plot curves --in <dir> --out <file>`` renders the metric curves of every
run found under <dir> (one panel per metric, one curve per run);
``plot snapshots --in <dir> --out <file>`` renders the snapshot heatmaps
(one column per run, one row per snapshot time). <dir> is a run directory
or a batch directory holding one run per subdirectory, as written by
``catsim run`` / ``catsim recipe``.

Exit codes: 0 success, 1 missing or ill-formed input. Diagnostics go to
stderr as single ``error: <message>`` lines.
"""

from __future__ import annotations

import argparse
import sys

from .figures import plot_curves, plot_snapshots
from .io import (
    SchemaError,
    find_runs,
    read_config,
    read_grid_csv,
    read_metrics,
    run_label,
    snapshot_times,
)


def _label(run_dir) -> str:
    config_path = run_dir / "config.txt"
    if config_path.is_file():
        return run_label(read_config(config_path))
    return run_dir.name


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot", description="Render figures from simulator output directories."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("curves", "snapshots"):
        p = sub.add_parser(name)
        p.add_argument("--in", dest="in_dir", required=True,
                       help="run directory or directory of runs")
        p.add_argument("--out", required=True, help="output image path")

    args = parser.parse_args(argv)
    try:
        if args.command == "curves":
            runs = [(_label(d), read_metrics(d / "metrics.csv")) for d in find_runs(args.in_dir)]
            plot_curves(runs, args.out)
        else:
            columns = []
            for run_dir in find_runs(args.in_dir):
                grids = {
                    t: read_grid_csv(run_dir / f"snapshot_t{t}.csv")
                    for t in snapshot_times(run_dir)
                }
                if grids:
                    columns.append((_label(run_dir), grids))
            if not columns:
                raise SchemaError(f"{args.in_dir}: no snapshot files in any run")
            plot_snapshots(columns, args.out)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
