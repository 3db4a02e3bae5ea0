#!/usr/bin/env python3
"""Print |gamma1_hat(n) - gamma1| on a grid of n for a catalogue model."""

import argparse

from taulsd import catalog, hoeffding


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--model", default="example1", choices=sorted(catalog.MODELS))
    ap.add_argument("--limit", type=float, default=0.3645)
    ap.add_argument("--grid", default="100,400,1600,6400")
    ap.add_argument("--p", type=int, default=10)
    args = ap.parse_args()
    grid = [int(v) for v in args.grid.split(",")]
    for row in hoeffding.check_g1_rate(catalog.MODELS[args.model], args.limit, grid,
                                       lambda n: args.p):
        print(row)


if __name__ == "__main__":
    main()
