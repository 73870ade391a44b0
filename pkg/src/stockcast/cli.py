"""Command-line entry points: run, dm, gradcheck, validate-data."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from .checks import run_gradcheck_suite
from .config import parse_config
from .dm_pipeline import dm_csv_text
from .errors import StockcastError
from .ingest import load_series, validate_series
from .runner import atomic_write, execute


def cmd_run(args) -> int:
    cfg = parse_config(args.config)
    if args.seed is not None:
        cfg.train = replace(cfg.train, seed=args.seed)
    return execute(cfg, jobs=args.jobs, all_traces=args.all_traces)


def cmd_dm(args) -> int:
    text = dm_csv_text(args.errors, mode=args.mode, alpha=args.alpha,
                       loss=args.loss, harvey=not args.no_harvey)
    atomic_write(args.output, text)
    print(f"wrote {args.output}")
    return 0


def cmd_gradcheck(args) -> int:
    results = run_gradcheck_suite(seed=args.seed)
    failed = False
    for r in results:
        status = "ok" if r.passed else "FAIL"
        print(f"{r.name:12s} worst rel err {r.worst_error:.3e} "
              f"(tol {r.tol:.0e}, resamples {r.resamples}) {status}")
        failed = failed or not r.passed
    return 1 if failed else 0


def cmd_validate_data(args) -> int:
    if args.config:
        cfg = parse_config(args.config)
        paths = [(s, cfg.stock_path(s)) for s in cfg.stocks]
    else:
        paths = [(os.path.splitext(f)[0], os.path.join(args.data_dir, f))
                 for f in sorted(os.listdir(args.data_dir)) if f.endswith(".csv")]
    bad = 0
    for symbol, path in paths:
        try:
            ts, load_report = load_series(path, symbol)
        except (StockcastError, FileNotFoundError) as exc:
            print(f"{symbol}: ERROR {exc}")
            bad += 1
            continue
        report = validate_series(ts)
        note = f", dropped {load_report.dropped_rows} row(s)" if load_report.dropped_rows else ""
        if report.ok:
            print(f"{symbol}: ok, {len(ts)} points "
                  f"{ts.dates[0].isoformat()}..{ts.dates[-1].isoformat()}{note}")
        else:
            print(f"{symbol}: {len(report.issues)} issue(s){note}")
            for idx, reason in report.issues[:10]:
                print(f"  row {idx}: {reason}")
            bad += 1
    return 1 if bad else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stockcast",
        description="Windowed stock-price forecasting benchmark harness.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute the configured experiment grid")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p_run.add_argument("--seed", type=int, default=None,
                       help="override the config master seed")
    p_run.add_argument("--all-traces", action="store_true",
                       help="emit forecast traces for every seed, not just the best")
    p_run.set_defaults(fn=cmd_run)

    p_dm = sub.add_parser("dm", help="pairwise DM tests from a run_errors CSV")
    p_dm.add_argument("--errors", required=True, help="run_errors.csv from `run`")
    p_dm.add_argument("--mode", choices=("single", "multi"), default="single")
    p_dm.add_argument("--alpha", type=float, default=1e-4)
    p_dm.add_argument("--loss", choices=("squared", "absolute"), default="squared")
    p_dm.add_argument("--no-harvey", action="store_true",
                      help="plain DM statistic with a normal reference")
    p_dm.add_argument("--output", default="dm.csv")
    p_dm.set_defaults(fn=cmd_dm)

    p_gc = sub.add_parser("gradcheck", help="finite-difference check of every layer")
    p_gc.add_argument("--seed", type=int, default=7)
    p_gc.set_defaults(fn=cmd_gradcheck)

    p_vd = sub.add_parser("validate-data", help="validate close-price CSV files")
    p_vd.add_argument("--config", default=None)
    p_vd.add_argument("--data-dir", default="./data")
    p_vd.set_defaults(fn=cmd_validate_data)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (StockcastError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
