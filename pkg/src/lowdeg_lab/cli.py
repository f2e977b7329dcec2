"""Command-line entry point: ``lowdeg-lab <subcommand> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

from . import __version__
from .graphs import LabeledGraph, format_edge_list
from .iso import canonical_form, census_csv, enumerate_classes, unlabeled_tree_counts
from .model import ModelParams, TruncationFailure, sample_correlated, sample_truncated

SCHEMA = "lowdeg-lab/1"


class UsageError(Exception):
    pass


def _emit(args, text: str, name: str | None = None) -> None:
    if args.out and args.out != "-":
        path = args.out
        if name and os.path.isdir(path):
            path = os.path.join(path, name)
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(args, payload: dict) -> None:
    _emit(args, json.dumps({"schema": SCHEMA, **payload}, indent=2, sort_keys=False) + "\n")


def _params(args, d=None) -> ModelParams:
    d = d if d is not None else getattr(args, "d", 2)
    try:
        if getattr(args, "s_one", False):
            return ModelParams(args.n, args.q, 1, d)
        return ModelParams(args.n, args.q, args.rho, d)
    except (ValueError, ArithmeticError) as exc:
        raise UsageError(str(exc)) from exc


def _phi_params(args, params: ModelParams):
    from .truncation import PhiParams

    return PhiParams(params.n, params.d, params.q, a=args.a, b=args.b)


def _parse_class(text: str):
    edges = [tuple(int(x) for x in part.split("-")) for part in text.split(";") if part]
    return canonical_form(LabeledGraph(edges))


# subcommands


def cmd_sample(args) -> int:
    params = _params(args)
    if args.truncated:
        pp = _phi_params(args, params)
        k_cap = args.k_cap if args.k_cap is not None else min(params.d ** 2, params.n)
        try:
            sample = sample_truncated(params, args.seed, k_cap, args.max_rejects, pp=pp)
        except TruncationFailure as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    else:
        sample = sample_correlated(params, args.seed)
    if args.format == "json":
        _json(args, {
            "n": params.n, "q": float(params.q), "rho": float(params.rho), "seed": args.seed,
            "pi": list(sample.pi_star.images),
            "G": [list(e) for e in sample.G.edges],
            "A": [list(e) for e in sample.A.edges],
            "B": [list(e) for e in sample.B.edges],
            "rejections": sample.rejections,
        })
        return 0
    if not args.out or not os.path.isdir(args.out):
        raise UsageError("edge-list output needs --out pointing to an existing directory")
    for name, g in (("G", sample.G), ("A", sample.A), ("B", sample.B)):
        with open(os.path.join(args.out, f"{name}.edges"), "w") as fh:
            fh.write(format_edge_list(g))
    with open(os.path.join(args.out, "pi.txt"), "w") as fh:
        fh.writelines(f"{i} {x}\n" for i, x in enumerate(sample.pi_star.images, start=1))
    return 0


def cmd_snr(args) -> int:
    from .poly import snr_admissible, snr_exact, snr_upper_bound

    params = _params(args)
    try:
        if args.admissible:
            rep = snr_admissible(params, args.d, _phi_params(args, params))
        else:
            rep = snr_exact(params, args.d)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    bound = snr_upper_bound(float(params.rho), args.d) if args.d >= 1 else 1.0
    payload = rep.as_dict()
    payload["bound"] = bound
    payload["admissible"] = args.admissible
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["edges", "classes", "contribution"])
        for row in payload["per_class"]:
            w.writerow([row["edges"], row["classes"], repr(row["contribution"])])
        _emit(args, buf.getvalue())
    else:
        _json(args, payload)
    return 0


def cmd_enum_classes(args) -> int:
    try:
        if args.trees:
            counts = unlabeled_tree_counts(args.k_max)
            if args.format == "json":
                _json(args, {"tree_counts": {str(v): c for v, c in counts.items()}})
            else:
                _emit(args, "v_count,trees\n" + "".join(f"{v},{c}\n" for v, c in counts.items()))
            return 0
        classes = enumerate_classes(args.k_max)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.format == "json":
        _json(args, {"counts": {str(k): len(v) for k, v in classes.items()},
                     "classes": [{"edges": c.e_count, "v_count": c.v_count, "aut": c.aut,
                                  "canon": c.edge_list_str()} for v in classes.values() for c in v]})
    else:
        _emit(args, census_csv(classes))
    return 0


def cmd_census(args) -> int:
    from .truncation import PhiParams, census_admissible

    try:
        pp = PhiParams(args.n, args.d, args.q, a=args.a, b=args.b)
        rows = [(N, len(enumerate_classes(N)[N]), census_admissible(N, pp)) for N in range(args.edges + 1)]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.format == "json":
        _json(args, {"phi_params": pp.as_dict(),
                     "rows": [{"N": N, "total_classes": t, "admissible_classes": a} for N, t, a in rows]})
    else:
        text = "N,total_classes,admissible_classes\n" + "".join(f"{N},{t},{a}\n" for N, t, a in rows)
        _emit(args, text)
    return 0


def cmd_verify(args) -> int:
    from .verify import run_suite

    results = run_suite(args.suite, quick=args.quick)
    ok = all(r.ok for r in results)
    if args.format == "json":
        _json(args, {"suite": args.suite, "ok": ok, "checks": [r.as_dict() for r in results]})
    else:
        buf = io.StringIO()
        buf.write(f"{'check':<60} {'instances':>10} {'max ratio':>12}  verdict\n")
        for r in results:
            mr = f"{r.max_ratio:.4g}" if math.isfinite(r.max_ratio) else "-"
            buf.write(f"{r.name:<60} {r.instances:>10} {mr:>12}  {r.verdict}")
            buf.write(f"  ({r.note})\n" if r.note else "\n")
        _emit(args, buf.getvalue())
    return 0 if ok else 1


def _experiment_spec(args, params):
    from .harness import ExperimentSpec

    threshold = args.threshold
    if threshold != "auto" and not threshold.startswith("quantile:"):
        try:
            threshold = float(threshold)
        except ValueError as exc:
            raise UsageError(f"bad threshold {args.threshold!r}") from exc
    cls = _parse_class(args.class_edges) if args.class_edges else None
    pp = _phi_params(args, params) if args.truncated else None
    try:
        return ExperimentSpec(params, args.statistic, threshold, args.trials, args.seed,
                              args.truncated, cls, args.d, args.k_cap, pp)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_experiment(args) -> int:
    from .harness import run_detection_experiment, write_trial_log

    params = _params(args)
    spec = _experiment_spec(args, params)
    try:
        rep = run_detection_experiment(spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.trial_log:
        with open(args.trial_log, "w", newline="") as fh:
            write_trial_log(rep, fh)
    _json(args, {"params": params.as_dict(), "statistic": spec.statistic_name, "seed": args.seed,
                 "truncated": args.truncated, "report": rep.as_dict()})
    return 0


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def cmd_sweep(args) -> int:
    from .harness import ExperimentSpec, sweep, sweep_csv

    grid = [(n, q, rho, d) for n in _ints(args.n) for q in _floats(args.q)
            for rho in _floats(args.rho) for d in _ints(args.d)]
    template_params = ModelParams(grid[0][0], grid[0][1], 0.0) if grid else None
    if template_params is None:
        raise UsageError("empty grid")
    cls = _parse_class(args.class_edges) if args.class_edges else None
    template = ExperimentSpec(template_params, args.statistic, "auto", args.trials, args.seed, cls=cls)
    rows = sweep(grid, template)
    if args.format == "json":
        _json(args, {"rows": rows})
    else:
        _emit(args, sweep_csv(rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="output file (or directory for edge lists)")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--threads", type=int, default=1,
                        help="accepted for interface compatibility; results never depend on it")

    parser = argparse.ArgumentParser(prog="lowdeg-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def model_args(p, d_default=2):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--q", type=float, required=True)
        p.add_argument("--rho", type=float, default=0.0)
        p.add_argument("--s-one", action="store_true", help="use the s = 1 boundary (rho = 1)")
        p.add_argument("--d", type=int, default=d_default)

    def weight_args(p):
        p.add_argument("--a", type=float, default=None, help="override the per-vertex log weight")
        p.add_argument("--b", type=float, default=None, help="override the per-edge log weight")

    p = sub.add_parser("sample", parents=[common], help="draw one correlated pair")
    model_args(p)
    weight_args(p)
    p.add_argument("--truncated", action="store_true")
    p.add_argument("--k-cap", type=int, default=None)
    p.add_argument("--max-rejects", type=int, default=1000)
    p.set_defaults(func=cmd_sample, default_format="json")

    p = sub.add_parser("snr", parents=[common], help="exact low-degree SNR")
    model_args(p, 4)
    weight_args(p)
    p.add_argument("--admissible", action="store_true", help="sum admissible classes up to d edges")
    p.set_defaults(func=cmd_snr, default_format="json")

    p = sub.add_parser("enum-classes", parents=[common], help="isomorphism-class census")
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--trees", action="store_true", help="count unlabeled trees by vertex number instead")
    p.set_defaults(func=cmd_enum_classes, default_format="csv")

    p = sub.add_parser("census", parents=[common], help="admissible class counts")
    p.add_argument("--edges", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--d", type=int, required=True)
    weight_args(p)
    p.set_defaults(func=cmd_census, default_format="csv")

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", choices=("graph-facts", "expectations", "orthonormality", "truncation", "bounds", "all"),
                   default="all")
    p.add_argument("--quick", action="store_true", help="reduced instance counts")
    p.set_defaults(func=cmd_verify, default_format="csv")

    def experiment_args(p):
        p.add_argument("--statistic", choices=("optimal", "edge_correlation", "class_count"),
                       default="edge_correlation")
        p.add_argument("--class-edges", default=None, help='class for class_count, e.g. "1-2;2-3"')
        p.add_argument("--trials", type=int, default=1000)

    p = sub.add_parser("experiment", parents=[common], help="one detection experiment")
    model_args(p)
    weight_args(p)
    experiment_args(p)
    p.add_argument("--threshold", default="auto", help='"auto", "quantile:<level>" or a number')
    p.add_argument("--truncated", action="store_true")
    p.add_argument("--k-cap", type=int, default=None)
    p.add_argument("--trial-log", default=None, help="CSV file for per-trial statistics")
    p.set_defaults(func=cmd_experiment, default_format="json")

    p = sub.add_parser("sweep", parents=[common], help="grid of experiments as CSV")
    p.add_argument("--n", required=True, help="comma-separated")
    p.add_argument("--q", required=True, help="comma-separated")
    p.add_argument("--rho", required=True, help="comma-separated")
    p.add_argument("--d", default="4", help="comma-separated")
    experiment_args(p)
    p.set_defaults(func=cmd_sweep, default_format="csv")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
