#!/usr/bin/env python3
"""Regenerate the moment and independence-test tables into an output directory.

    python3 scripts/run_tables.py --out results/ [--paper-scale] [--skip table4]
"""

import argparse
import pathlib
import sys

from taulsd.cli import main as cli


def run(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--paper-scale", action="store_true")
    ap.add_argument("--skip", nargs="*", default=[])
    args = ap.parse_args(argv)
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    worst = 0
    for table in ("table1", "table2", "table3", "table4", "fig5"):
        if table in args.skip:
            continue
        cmd = ["reproduce", table, "--seed", str(args.seed), "--out", str(out / f"{table}.csv")]
        if table == "table4" and args.paper_scale:
            cmd.append("--paper-scale")
        if table == "fig5":
            cmd.append("--svg")
        print(f"== {table}", flush=True)
        worst = max(worst, cli(cmd))
    return worst


if __name__ == "__main__":
    sys.exit(run())
