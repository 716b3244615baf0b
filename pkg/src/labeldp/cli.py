"""Command-line front end.

Subcommands:
    run        execute a config's sweep and write records.csv to --out
    fit        fit a rate exponent to a records CSV
    audit      exhaustively audit a local mechanism's realized epsilon
    audit-cdp  exhaustively audit the central classifier over label flips

Exit codes: 0 success, 1 configuration/usage error, 2 audit failure (the
realized privacy loss exceeded the declared budget).
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from .core import CLASSIFICATION, Dataset
from .estimators import exp_classifier_model_distribution
from .harness import (
    ABSCISSAS,
    ConfigError,
    aggregate_points,
    fit_rate,
    load_config,
    read_records,
    run_experiment,
    theoretical_exponent,
    with_master_seed,
    write_fit_summary,
    write_plot_data,
    write_records,
)
from .mechanisms import (
    audit_cdp_exhaustive,
    audit_ldp_discrete,
    kbit_output_distribution,
    rr_output_distribution,
)

AUDIT_SLACK = 1e-9


class _Parser(argparse.ArgumentParser):
    # usage problems are configuration errors: exit 1, not argparse's 2
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="labeldp", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_run = sub.add_parser("run", help="run an experiment sweep")
    p_run.add_argument("--config", required=True, help="config file path")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--threads", type=int, default=1, help="worker threads")
    p_run.add_argument("--seed", type=int, default=None, help="override master_seed")

    p_fit = sub.add_parser("fit", help="fit ln(risk) vs ln(abscissa)")
    p_fit.add_argument("--in", dest="infile", required=True, help="records CSV path")
    p_fit.add_argument("--abscissa", required=True, choices=ABSCISSAS)
    p_fit.add_argument("--aggregator", default="median", choices=("median", "mean"))
    p_fit.add_argument("--out", default=None, help="directory for plot data and summary")
    p_fit.add_argument("--beta", type=float, default=None, help="smoothness exponent")
    p_fit.add_argument("--gamma", type=float, default=None, help="margin exponent")
    p_fit.add_argument("--dim", type=int, default=None, help="feature dimension")
    p_fit.add_argument("--p", type=float, default=None, help="moment order")

    p_audit = sub.add_parser("audit", help="audit a local mechanism by enumeration")
    p_audit.add_argument("--mechanism", required=True, choices=("kbit", "rr"))
    p_audit.add_argument("--K", type=int, required=True, help="number of classes")
    p_audit.add_argument("--eps", type=float, required=True, help="declared budget")

    p_cdp = sub.add_parser("audit-cdp", help="audit the central classifier over label flips")
    p_cdp.add_argument("--samples", type=int, required=True, help="dataset size (<= 12)")
    p_cdp.add_argument("--cubes", type=int, required=True, help="partition cells (d = 1)")
    p_cdp.add_argument("--eps", type=float, required=True, help="declared budget")
    p_cdp.add_argument("--flips", type=int, required=True, help="label substitutions g")
    p_cdp.add_argument("--classes", type=int, default=2, help="number of classes")
    p_cdp.add_argument("--seed", type=int, default=0, help="dataset seed")
    p_cdp.add_argument("--full-dp", action="store_true", help="audit the s = 4 variant")

    return parser


def _cmd_run(args) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config = with_master_seed(config, args.seed)
    if args.threads < 1:
        raise ConfigError("--threads must be >= 1")
    records = run_experiment(config, threads=args.threads)
    os.makedirs(args.out, exist_ok=True)
    out_csv = os.path.join(args.out, "records.csv")
    write_records(records, out_csv, include_timing=config.record_timing)
    print(f"wrote {len(records)} records to {out_csv}")
    return 0


def _cmd_fit(args) -> int:
    records = read_records(args.infile)
    if not records:
        raise ConfigError("no records in input CSV")
    tasks = {r.task for r in records}
    if len(tasks) > 1:
        raise ConfigError(f"input mixes tasks {sorted(tasks)}; fit one sweep at a time")
    expected = None
    if args.beta is not None and args.dim is not None:
        expected = theoretical_exponent(
            next(iter(tasks)), args.abscissa, args.beta, args.dim,
            gamma=args.gamma, p=args.p,
        )
    try:
        fit = fit_rate(records, args.abscissa, args.aggregator, expected)
        points = aggregate_points(records, args.abscissa, args.aggregator)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    print(f"abscissa          {fit.abscissa}")
    print(f"points            {points.shape[0]}")
    print(f"slope             {fit.slope:+.6f}")
    print(f"intercept         {fit.intercept:+.6f}")
    print(f"slope_std_error   {fit.slope_std_error:.6f}")
    if expected is not None:
        print(f"theoretical slope {expected:+.6f}")
    if args.out is not None:
        os.makedirs(args.out, exist_ok=True)
        write_plot_data(points, os.path.join(args.out, "plot_data.txt"))
        write_fit_summary(
            fit, args.aggregator, points.shape[0], os.path.join(args.out, "fit_summary.txt")
        )
        print(f"wrote plot_data.txt and fit_summary.txt to {args.out}")
    return 0


def _cmd_audit(args) -> int:
    if args.K < 2:
        raise ConfigError("--K must be >= 2")
    if not (args.eps > 0.0) or math.isinf(args.eps):
        raise ConfigError("--eps must be a positive finite real")
    if args.mechanism == "kbit":
        if args.K > 20:
            raise ConfigError("kbit audit enumerates 2^K atoms; --K must be <= 20")
        dists = kbit_output_distribution(args.K, args.eps)
    else:
        dists = rr_output_distribution(args.K, args.eps)
    realized = audit_ldp_discrete(dists)
    ok = realized <= args.eps + AUDIT_SLACK
    print(f"mechanism         {args.mechanism} (K={args.K})")
    print(f"declared epsilon  {args.eps:.12g}")
    print(f"realized epsilon  {realized:.12g}")
    print("PASS" if ok else "FAIL: realized epsilon exceeds the declared budget")
    return 0 if ok else 2


def _cmd_audit_cdp(args) -> int:
    if not (1 <= args.samples <= 12):
        raise ConfigError("--samples must lie in 1..12 for exhaustive enumeration")
    if args.cubes < 1:
        raise ConfigError("--cubes must be >= 1")
    if args.classes < 2:
        raise ConfigError("--classes must be >= 2")
    if not (args.eps > 0.0) or math.isinf(args.eps):
        raise ConfigError("--eps must be a positive finite real")
    if args.flips < 0:
        raise ConfigError("--flips must be >= 0")
    if args.classes**args.cubes > 2**16:
        raise ConfigError("model space K^G exceeds 2^16 atoms; shrink --cubes or --classes")
    rng = np.random.default_rng(args.seed)
    features = rng.random((args.samples, 1))
    labels = rng.integers(1, args.classes + 1, size=args.samples)
    dataset = Dataset(features, labels, task=CLASSIFICATION, num_classes=args.classes)
    h = 1.0 / args.cubes

    def trainer(ds):
        return exp_classifier_model_distribution(ds, h, args.eps, full_dp=args.full_dp)

    realized = audit_cdp_exhaustive(trainer, dataset, args.flips)
    budget = args.flips * args.eps
    ok = realized <= budget + AUDIT_SLACK
    print(f"trainer           exponential-mechanism classifier "
          f"(samples={args.samples}, cubes={args.cubes}, K={args.classes})")
    print(f"flips             {args.flips}")
    print(f"group budget      {budget:.12g}")
    print(f"realized ratio    {realized:.12g}")
    print("PASS" if ok else "FAIL: realized ratio exceeds the group budget")
    return 0 if ok else 2


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "fit":
            return _cmd_fit(args)
        if args.command == "audit":
            return _cmd_audit(args)
        return _cmd_audit_cdp(args)
    except ConfigError as exc:
        print(f"labeldp: config error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"labeldp: config error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
