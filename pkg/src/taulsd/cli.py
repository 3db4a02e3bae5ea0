"""Command-line entry point: ``taulsd <subcommand> ...``.

Exit codes: 0 ok, 1 usage or invalid input, 2 I/O failure, 3 strict tolerance failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import catalog, clustercheck, freelim, hoeffding, indeptest, io, reproduce
from .kendall import centered_scaled, kendall_tau_matrix
from .model import load_model, sample_matrix
from .spectra import ecdf, eigenvalues_sym, esd_moments, kolmogorov_distance

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_STRICT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _model(args):
    if args.model_file:
        m = load_model(args.model_file)
        if args.p or args.n:
            m = m.resized(args.p or m.p, args.n or m.n)
        return m
    if not args.model:
        raise UsageError("give --model NAME or --model-file PATH")
    return catalog.get_model(args.model, args.p, args.n)


def _config(args) -> dict:
    return {k: v for k, v in vars(args).items() if k != "func"}


def _out(args, suffix=""):
    if not args.out:
        raise UsageError("--out is required")
    base = Path(args.out)
    return base.with_name(base.stem + suffix + base.suffix) if suffix else base


def cmd_simulate(args):
    m = _model(args)
    X = sample_matrix(m, args.seed)
    io.write_matrix_csv(_out(args), X, io.header_meta(_config(args)))


def cmd_tau(args):
    X = io.read_matrix_csv(args.input)
    T = kendall_tau_matrix(X)
    if args.centered:
        T = centered_scaled(T, X.shape[1], args.scale)
    io.write_matrix_csv(_out(args), T, io.header_meta(_config(args)))


def cmd_spectrum(args):
    A = io.read_matrix_csv(args.input)
    if args.from_data:
        T = kendall_tau_matrix(A)
        A = centered_scaled(T, A.shape[1], args.scale)
    elif args.scale != 1.0:
        A = args.scale * A
    lam = eigenvalues_sym(A)
    meta = io.header_meta(_config(args))
    io.write_csv(_out(args, "_eigs"), ["eigenvalue"], ([v] for v in lam), meta)
    io.write_csv(_out(args, "_moments"), ["r", "moment"],
                 enumerate(esd_moments(lam, args.rmax).tolist(), 1), meta)
    F = ecdf(lam)
    io.write_csv(_out(args, "_ecdf"), ["x", "F"], io.ecdf_rows(F), meta)
    if args.svg:
        io.svg_ecdf_overlay(_out(args).with_suffix(".svg"), [("ESD", F)], "ESD")


def limit_moment_vector(m, scale: float, rmax_pairs: int) -> freelim.MomentVector:
    """IID evaluator for column-IID models, structured evaluator otherwise."""
    if m.is_column_iid():
        a = freelim.iid_moment_sequence(hoeffding.column_iid_variances(m), 2 * rmax_pairs)
        return freelim.lsd_moments(lambda pi: freelim.g2pi_iid(pi, a), rmax_pairs, scale,
                                   {"evaluator": "iid", "model": m.name})
    return reproduce.structured_moments(m, scale, rmax_pairs)


def cmd_limit_moments(args):
    m = _model(args)
    mv = limit_moment_vector(m, args.scale, args.rmax)
    meta = io.header_meta(_config(args))
    if args.out:
        io.write_json(_out(args), mv.to_json(), meta)
        io.write_csv(_out(args).with_suffix(".csv"), ["r", "moment"],
                     enumerate(mv.as_floats().tolist(), 1), meta)
    print(" ".join(f"{v:.6g}" for v in mv.as_floats()))


def cmd_verify(args):
    m = _model(args)
    tables = hoeffding.ScoreTables(m.dists)
    st = hoeffding.trace_stats(m, tables)
    a2 = hoeffding.check_assumption2(m, tables=tables)
    report = {"model": m.name, "p": m.p, "n": m.n, "trace_stats": st.to_json(),
              "assumption2": a2.to_json(),
              "assumption3a": hoeffding.check_assumption3a(m, tables)}
    if args.model and args.g1_grid:
        grid = [int(v) for v in args.g1_grid.split(",")]
        factory = catalog.MODELS[args.model]
        report["g1_rate"] = hoeffding.check_g1_rate(
            factory, st.gamma1_hat, grid, lambda n: max(2, round(np.sqrt(n))))
    meta = io.header_meta(_config(args))
    if args.out:
        io.write_json(_out(args), report, meta)
    else:
        json.dump({"meta": meta, **report}, sys.stdout, indent=2, default=io._json_default)
        print()
    if args.strict and not a2.ok:
        return EXIT_STRICT
    return EXIT_OK


def cmd_independence_test(args):
    m = _model(args)
    cal, ev = (2000, 1000) if args.paper_scale else (args.cal_reps, args.reps)
    alphas = [float(a) for a in args.alphas.split(",")]
    res = indeptest.size_power_table(m, alphas, cal, ev, args.level, args.seed)
    out = {"calibration": res["calibration"].to_json(),
           "evaluation": {str(a): r.to_json() for a, r in res["evaluation"].items()}}
    meta = io.header_meta(_config(args))
    if args.out:
        io.write_json(_out(args), out, meta)
        rows = [("calibration", 0.0, r, d) for r, d in enumerate(res["calibration"].distances)]
        for a, rep in res["evaluation"].items():
            rows += [("evaluation", a, r, d) for r, d in enumerate(rep.distances)]
        io.write_csv(_out(args).with_suffix(".csv"), ["phase", "alpha", "rep", "distance"],
                     rows, meta)
    print(f"cutoff {res['calibration'].cutoff:g}")
    for a, rep in res["evaluation"].items():
        print(f"alpha {a:g}: rejection rate {rep.rejection_rate:.3f}")


def cmd_cluster_verify(args):
    X = io.read_matrix_csv(args.input)
    if args.labels:
        labels = clustercheck.ClusterLabels(io.read_labels_csv(args.labels, X.shape))
    else:
        labels = clustercheck.cluster_columns(X, args.ks_threshold)
    report = {"num_clusters": labels.num_clusters, "sizes": labels.sizes.tolist()}
    if labels.num_clusters >= 2:
        report["symmetry"] = clustercheck.symmetry_stats(X, labels).to_json()
    G = clustercheck.ghat_ki(X, labels, args.k - 1, args.i - 1, centered=args.centered)
    report["ghat"] = {"k": args.k, "i": args.i, "centered": args.centered,
                      "trace_over_n": float(np.trace(G) / X.shape[1]),
                      "class_values": np.unique(np.round(G, 12)).tolist()}
    meta = io.header_meta(_config(args))
    if args.out:
        io.write_json(_out(args), report, meta)
        io.write_labels_csv(_out(args).with_suffix(".labels.csv"), labels.labels, meta)
    else:
        json.dump(report, sys.stdout, indent=2)
        print()


def _print_rows(rows):
    w = max(len(r.quantity) for r in rows)
    for r in rows:
        c = r.csv_row()
        comp = "-" if r.computed is None else f"{float(r.computed):.6g}"
        delta = "-" if r.delta is None else f"{r.delta:.3g}"
        print(f"{r.quantity:<{w}}  target {c[1] or '-':<24} computed {comp:<12} "
              f"delta {delta:<10} {c[5]}")


def cmd_reproduce(args):
    meta = io.header_meta(_config(args))
    t = args.target
    if t == "table1":
        rows = reproduce.table1(args.p or 30, args.n or 900, args.seed)
    elif t == "table2":
        rows = reproduce.table2(args.p or 30, args.n or 900,
                                tuple(range(args.seed, args.seed + 5)))
    elif t == "table3":
        models = (args.model,) if args.model else tuple(reproduce.TABLE3_TARGETS)
        if args.model and args.model not in reproduce.TABLE3_TARGETS:
            raise UsageError(f"table3 covers {sorted(reproduce.TABLE3_TARGETS)}")
        rows = reproduce.table3(args.p or 70, args.n or 4900, args.seed, models)
    elif t == "table4":
        shapes = ((args.n, args.p),) if args.n and args.p else tuple(reproduce.TABLE4_TARGETS)
        cal, ev = (2000, 1000) if args.paper_scale else (args.cal_reps, args.reps)
        rows, _ = reproduce.table4(shapes, cal, ev, args.seed)
    else:
        panels = reproduce.fig5(args.n or 100, args.p or 10, args.seed)
        rows = []
        for alpha, (Fz, Fx) in panels.items():
            rows += [("Z", alpha, x, f) for x, f in io.ecdf_rows(Fz)]
            rows += [("reference", alpha, x, f) for x, f in io.ecdf_rows(Fx)]
            if args.svg and args.out:
                io.svg_ecdf_overlay(_out(args, f"_alpha{alpha:g}").with_suffix(".svg"),
                                    [("Z", Fz), ("reference", Fx)], f"alpha = {alpha:g}")
        if args.out:
            io.write_csv(_out(args), ["curve", "alpha", "x", "F"], rows, meta)
        for alpha, (Fz, Fx) in panels.items():
            print(f"alpha {alpha:g}: Kolmogorov distance {kolmogorov_distance(Fz, Fx):.3f}")
        return EXIT_OK
    if args.out:
        io.write_csv(_out(args), reproduce.CSV_COLUMNS, (r.csv_row() for r in rows), meta)
    _print_rows(rows)
    if args.strict and any(r.ok is False for r in rows):
        return EXIT_STRICT
    return EXIT_OK


def _add_model_args(sp, required=False):
    sp.add_argument("--model", choices=sorted(catalog.MODELS), help="shipped example model")
    sp.add_argument("--model-file", help="model JSON file")
    sp.add_argument("--p", type=int)
    sp.add_argument("--n", type=int)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="taulsd", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="model -> data matrix CSV")
    _add_model_args(sp)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("tau", help="data CSV -> Kendall tau matrix CSV")
    sp.add_argument("--input", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--centered", action="store_true", help="emit sqrt(n/p)(T - D(T))")
    sp.add_argument("--scale", type=float, default=1.0)
    sp.set_defaults(func=cmd_tau)

    sp = sub.add_parser("spectrum", help="symmetric matrix CSV -> eigenvalues, moments, ECDF")
    sp.add_argument("--input", required=True)
    sp.add_argument("--out", required=True, help="output prefix, e.g. run.csv")
    sp.add_argument("--from-data", action="store_true", help="input is a data matrix")
    sp.add_argument("--scale", type=float, default=1.0)
    sp.add_argument("--rmax", type=int, default=8)
    sp.add_argument("--svg", action="store_true")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("limit-moments", help="theoretical limit moments")
    _add_model_args(sp)
    sp.add_argument("--scale", type=float, default=1.0)
    sp.add_argument("--rmax", type=int, default=4, help="largest R (moment order 2R)")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_limit_moments)

    sp = sub.add_parser("verify", help="assumption checks as JSON")
    _add_model_args(sp)
    sp.add_argument("--g1-grid", help="comma-separated n values for the gamma_1 rate check")
    sp.add_argument("--strict", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("independence-test", help="empirical size and power")
    _add_model_args(sp)
    sp.add_argument("--alphas", default="0,1,2")
    sp.add_argument("--reps", type=int, default=200)
    sp.add_argument("--cal-reps", type=int, default=200)
    sp.add_argument("--level", type=float, default=0.95)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--paper-scale", action="store_true", help="2000 calibration, 1000 evaluation reps")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_independence_test)

    sp = sub.add_parser("cluster-verify", help="cluster-based diagnostics")
    sp.add_argument("--input", required=True)
    sp.add_argument("--labels", help="labels CSV (k, i, cluster); default: column clustering")
    sp.add_argument("--ks-threshold", type=float)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--i", type=int, default=1)
    sp.add_argument("--centered", action="store_true", help="mean-subtracted diagnostic variant")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_cluster_verify)

    sp = sub.add_parser("reproduce", help="recompute a published table or figure")
    sp.add_argument("target", choices=["table1", "table2", "table3", "table4", "fig5"])
    sp.add_argument("--model", choices=sorted(catalog.MODELS))
    sp.add_argument("--p", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--reps", type=int, default=200)
    sp.add_argument("--cal-reps", type=int, default=200)
    sp.add_argument("--paper-scale", action="store_true")
    sp.add_argument("--strict", action="store_true")
    sp.add_argument("--svg", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_reproduce)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        code = args.func(args)
    except io.FormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return code or EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
