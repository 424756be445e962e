"""Command-line entry point.

Exit status: 0 on success, 1 on usage errors, 2 on data errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .engine import ConfigurationError
from .harness.battery import OVERVIEW_COLUMNS, BatteryOptions, overview_line, sb_battery
from .harness.experiment import run_experiment
from .harness.grid import GridSpec
from .harness.io import DataError
from .harness.summary import load_poc_groups, summarize_poc, write_poc_summary
from .rng import Rng
from .sdis import infeasibility_probability
from .stats import correlation_baseline_threshold, spacing_baseline

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sdislab", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="execute a grid spec")
    p.add_argument("--spec", required=True, type=Path, help="grid spec file (key = value lines)")
    p.add_argument("--out", required=True, type=Path, help="output directory")
    p.add_argument("--parallel", type=int, default=1, metavar="K")

    p = sub.add_parser("poc", help="summarize PoC values of a results directory")
    p.add_argument("results", type=Path)
    p.add_argument("--bins", type=int, default=20)
    p.add_argument("--out", type=Path, default=None, help="defaults to the results directory")

    p = sub.add_parser("sbtest", help="structural-bias battery on a positions CSV")
    p.add_argument("csv", type=Path)
    p.add_argument("--alpha", type=float, default=0.01)
    p.add_argument("--permutations", type=int, default=1000)
    p.add_argument("--bootstrap", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=float, default=None,
                   help="fixed |rho| outlier threshold (default: simulate it)")
    p.add_argument("--out", type=Path, default=None, help="write battery CSV/JSON here")

    p = sub.add_parser("baseline", help="correlation threshold and spacing baseline")
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--simulations", type=int, default=10000)
    p.add_argument("--percentile", type=float, default=99.0)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--spacing-replicates", type=int, default=1000)
    p.add_argument("--out", type=Path, default=None, help="write pooled baseline spacings to this CSV")

    p = sub.add_parser("prob", help="tabulate 1 - (1 - p)^n")
    p.add_argument("--p", type=_float_list, required=True)
    p.add_argument("--n", type=_int_list, required=True)
    return parser


def _cmd_run(args) -> int:
    if args.parallel < 1:
        raise UsageError("--parallel must be >= 1")
    spec = GridSpec.load(args.spec)
    result = run_experiment(spec, args.out, args.parallel)
    print(f"{len(result.cells)} cells, {len(result.records)} runs, {len(result.failed)} failed cells -> {args.out}")
    return EXIT_OK


def _cmd_poc(args) -> int:
    groups = load_poc_groups(args.results)
    if not groups:
        raise DataError(f"{args.results}: no successful cells to summarize")
    summaries = summarize_poc(groups, bins=args.bins)
    write_poc_summary(summaries, args.out or args.results, bins=args.bins)
    print("mutation,crossover,sdis,N,F,Cr,median,iqr")
    for s in summaries:
        m, c, d, N, F, Cr = s.key
        print(f"{m},{c},{d},{N},{F:g},{Cr:g},{s.median:.4f},{s.iqr:.4f}")
    return EXIT_OK


def _cmd_sbtest(args) -> int:
    if not 0 < args.alpha < 1:
        raise UsageError("--alpha must lie in (0, 1)")
    if args.permutations < 100 or args.bootstrap < 100:
        raise UsageError("--permutations and --bootstrap must be >= 100")
    options = BatteryOptions(alpha=args.alpha, permutations=args.permutations,
                             bootstrap=args.bootstrap, seed=args.seed, threshold=args.threshold)
    result = sb_battery(args.csv, options, out_dir=args.out)
    print(",".join(OVERVIEW_COLUMNS))
    print(overview_line(result))
    return EXIT_OK


def _cmd_baseline(args) -> int:
    if args.simulations < 1000:
        raise UsageError("--simulations must be >= 1000")
    if not 0 < args.percentile <= 100:
        raise UsageError("--percentile must lie in (0, 100]")
    if args.runs < 3:
        raise UsageError("--runs must be >= 3")
    threshold = correlation_baseline_threshold(args.runs, args.simulations, args.percentile, Rng(args.seed))
    base = spacing_baseline(args.runs, args.spacing_replicates, args.seed)
    probs = [0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99]
    report = {
        "correlation_threshold": round(threshold, 6),
        "runs": args.runs,
        "simulations": args.simulations,
        "percentile": args.percentile,
        "seed": args.seed,
        "spacing_baseline": {
            "replicates": args.spacing_replicates,
            "size": int(base.size),
            "mean": float(base.mean()),
            "quantiles": {str(q): float(v) for q, v in zip(probs, np.quantile(base, probs))},
        },
    }
    if args.out is not None:
        np.savetxt(args.out, base, fmt="%.17g", header="spacing", comments="")
    print(f"correlation_threshold {threshold:.4f}")
    print(json.dumps(report, indent=2))
    return EXIT_OK


def _cmd_prob(args) -> int:
    for p in args.p:
        if not 0 <= p <= 1:
            raise UsageError(f"--p values must lie in [0, 1], got {p}")
    for n in args.n:
        if n < 1:
            raise UsageError(f"--n values must be >= 1, got {n}")
    print("p,n,probability")
    for p in args.p:
        for n in args.n:
            print(f"{p:g},{n},{infeasibility_probability(p, n):.4f}")
    return EXIT_OK


_COMMANDS = {"run": _cmd_run, "poc": _cmd_poc, "sbtest": _cmd_sbtest, "baseline": _cmd_baseline,
             "prob": _cmd_prob}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"sdislab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, ConfigurationError) as exc:
        print(f"sdislab {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        where = exc.filename if exc.filename is not None else ""
        print(f"sdislab {args.command}: {where}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
