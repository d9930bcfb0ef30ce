"""CLI entry point: run, compare, sweep, scale, generate, import-spmf, info, stats."""

import argparse
import logging
import os
import sys
from typing import List, Optional

from dotenv import load_dotenv

from .algorithms import ALL_ALGORITHMS
from .bench import compare, execute, scale, sweep
from .config import AppConfig, load_config
from .dataset import import_spmf_huim, load_dataset, parse_utility_table, write_native
from .db import Database
from .errors import DatasetParseError, OracleRefusal, ThresholdError
from .generator import generate
from .logger import setup_logger
from .measures import describe
from .models import REPORTED_CLASSES, ClassificationReport, QuantitativeDatabase, Thresholds
from .report import build_run_report, write_csv, write_json

logger = logging.getLogger("frequtil")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_DIFF = 3
EXIT_TIMEOUT = 4
EXIT_REFUSED = 5


class CliParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _split_list(values: List[str]) -> List[str]:
    out = []
    for v in values:
        out.extend(p.strip() for p in v.split(",") if p.strip())
    return out


def _open_ledger(config: AppConfig) -> Optional[Database]:
    return Database(config.db_path) if config.bench.record_runs else None


def _load(args) -> QuantitativeDatabase:
    db = load_dataset(args.dataset, args.spmf_utilities)
    logger.info(f"Loaded {args.dataset}: {len(db):,} transactions, {len(db.items()):,} items")
    return db


def _bench_config(config: AppConfig, args) -> AppConfig:
    """Fold --timeout and --trace-alloc into the bench section."""
    if getattr(args, "timeout", None) is not None:
        config.bench.timeout = args.timeout
    if getattr(args, "trace_alloc", False):
        config.bench.trace_alloc = True
    return config


def print_run_summary(doc: dict):
    params, stats = doc["parameters"], doc["stats"]
    print("\n" + "=" * 70)
    print(f"  {params['algorithm'].upper()} on {params['dataset']}")
    print("=" * 70)
    print(f"{'Transactions':<24} {params['transactions']:>14,}")
    print(f"{'min_util':<24} {params['min_util']:>14} ({params['resolved_min_util']} units)")
    print(f"{'min_fre':<24} {params['min_fre']:>14} ({params['resolved_min_fre']})")
    print(f"{'Status':<24} {stats['status']:>14}")
    print(f"{'Wall time':<24} {stats['wall_time_ms']:>11,.1f} ms")
    if stats["peak_rss_bytes"] is not None:
        print(f"{'Peak RSS (best-effort)':<24} {_format_bytes(stats['peak_rss_bytes']):>14}")
    if stats["peak_alloc_bytes"] is not None:
        print(f"{'Peak allocations':<24} {_format_bytes(stats['peak_alloc_bytes']):>14}")
    print(f"{'Scans':<24} {stats['scan_count']:>14,}")
    print("-" * 70)
    for cls in REPORTED_CLASSES:
        print(f"{cls.value:<24} {stats[cls.value.lower()]:>14,}")
    print()


def show_info(path: str, db: QuantitativeDatabase):
    summary = describe(db)
    table = db.utilities
    print("\n" + "=" * 70)
    print(f"  DATASET {path}")
    print("=" * 70)
    print(f"{'Transactions':<24} {summary.transactions:>14,}")
    print(f"{'Items':<24} {summary.items:>14,}")
    print(f"{'Avg length':<24} {summary.avg_length:>14.2f}")
    print(f"{'Max length':<24} {summary.max_length:>14,}")
    print(f"{'Total utility':<24} {table.amount(summary.total_utility):>14f}")
    print(f"{'Total quantity':<24} {summary.total_quantity:>14,}")
    print(f"{'Money scale':<24} {summary.money_scale:>14,}")
    print()


def show_stats(db: Database):
    print("\n" + "=" * 70)
    print("  RUN STATISTICS")
    print("=" * 70)
    print(f"{'Dataset':<22} {'Algo':<7} {'Status':<9} {'Runs':>6} {'Avg ms':>12} {'Max RSS':>10}")
    print("-" * 70)

    total = 0
    for dataset, algorithm, status, count, avg_ms, max_rss in db.get_stats():
        print(f"{dataset[:22]:<22} {algorithm:<7} {status:<9} {count:>6} "
              f"{avg_ms:>12,.1f} {_format_bytes(max_rss):>10}")
        total += count

    print("-" * 70)
    print(f"{'TOTAL':<22} {'':7} {'':9} {total:>6}")
    print()


def _format_bytes(n: int) -> str:
    if n < 1024:
        return f"{n} B"
    elif n < 1024 ** 2:
        return f"{n / 1024:.1f} KB"
    elif n < 1024 ** 3:
        return f"{n / 1024 ** 2:.1f} MB"
    else:
        return f"{n / 1024 ** 3:.2f} GB"


def cmd_run(args, config: AppConfig) -> int:
    db = _load(args)
    thresholds = Thresholds.parse(args.min_util, args.min_fre)
    ledger = _open_ledger(config)
    dataset = os.path.basename(args.dataset)

    overrides = {"trace_visits": True} if args.algo == "fast" and args.trace_visits else {}
    result = execute(args.algo, db, thresholds, config, dataset, ledger, **overrides)

    if result.report is not None:
        doc = build_run_report(dataset, db, thresholds, result.resolved, result.report,
                               emit_patterns=args.emit_patterns)
    else:
        doc = build_run_report(dataset, db, thresholds, result.resolved,
                               ClassificationReport(result.stats))
        doc["error"] = result.error
    write_json(doc, args.out)
    if args.out:
        print_run_summary(doc)

    return EXIT_TIMEOUT if result.timed_out else EXIT_OK


def cmd_compare(args, config: AppConfig) -> int:
    db = _load(args)
    thresholds = Thresholds.parse(args.min_util, args.min_fre)
    dataset = os.path.basename(args.dataset)
    result = compare(db, thresholds, config, dataset, _open_ledger(config),
                     include_oracle=not args.no_oracle)
    write_json(result.to_dict(dataset, db), args.out)

    if result.timeouts:
        return EXIT_TIMEOUT
    return EXIT_OK if result.clean else EXIT_DIFF


def cmd_sweep(args, config: AppConfig) -> int:
    db = _load(args)
    fre_list = _split_list(args.min_fre)
    util_list = _split_list(args.min_util)
    rows = sweep(db, fre_list, util_list, args.algo, config, os.path.basename(args.dataset),
                 _open_ledger(config), parallel=args.parallel)
    write_csv(rows, args.out)
    return EXIT_OK


def cmd_scale(args, config: AppConfig) -> int:
    db = _load(args)
    thresholds = Thresholds.parse(args.min_util, args.min_fre)
    slices = [int(s) for s in _split_list(args.slices)]
    rows = scale(db, slices, args.algo, thresholds, config, os.path.basename(args.dataset),
                 _open_ledger(config))
    write_csv(rows, args.out)
    return EXIT_OK


def cmd_generate(args, config: AppConfig) -> int:
    settings = config.generator
    for flag, attr in (("transactions", "transactions"), ("items", "items"),
                       ("avg_len", "avg_len"), ("max_quantity", "max_quantity"),
                       ("zipf", "zipf_exponent"), ("seed", "seed")):
        value = getattr(args, flag)
        if value is not None:
            setattr(settings, attr, value)
    if args.utility_range is not None:
        settings.utility_min, settings.utility_max = args.utility_range

    db = generate(settings.to_generator_config())
    out = args.out or os.path.join(config.data_dir, f"generated_{settings.seed}.txt")
    write_native(db, out)
    print(f"Wrote {len(db):,} transactions over {len(db.items()):,} items to {out}")
    return EXIT_OK


def cmd_import_spmf(args, config: AppConfig) -> int:
    table = parse_utility_table(args.utilities)
    db = import_spmf_huim(args.dataset, table)
    write_native(db, args.out)
    print(f"Converted {len(db):,} transactions from {args.dataset} to {args.out}")
    return EXIT_OK


def cmd_info(args, config: AppConfig) -> int:
    show_info(args.dataset, _load(args))
    return EXIT_OK


def cmd_stats(args, config: AppConfig) -> int:
    show_stats(Database(config.db_path))
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
    "scale": cmd_scale,
    "generate": cmd_generate,
    "import-spmf": cmd_import_spmf,
    "info": cmd_info,
    "stats": cmd_stats,
}


def build_parser() -> CliParser:
    parser = CliParser(prog="frequtil", description="Frequency/utility pattern classifier")
    parser.add_argument("--config", type=str, default=None,
                        help="Path to config file (default: $FREQUTIL_CONFIG or config.yaml)")
    parser.add_argument("--log-level", type=str, default="INFO",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("dataset", help="Native dataset, or SPMF HUIM file with --spmf-utilities")
    data.add_argument("--spmf-utilities", type=str, default=None, metavar="FILE",
                      help="Header-only native file with the @ITEM table for an SPMF input")

    bench = argparse.ArgumentParser(add_help=False)
    bench.add_argument("--timeout", type=float, default=None, help="Seconds per algorithm run")
    bench.add_argument("--trace-alloc", action="store_true", help="Trace Python allocations")
    bench.add_argument("--out", type=str, default=None, help="Output file (default: stdout)")

    algo = argparse.ArgumentParser(add_help=False)
    algo.add_argument("--algo", choices=list(ALL_ALGORITHMS), default="fast")

    single = argparse.ArgumentParser(add_help=False)
    single.add_argument("--min-util", required=True, help="Money amount, or percent of total utility")
    single.add_argument("--min-fre", required=True, help="Count, or percent of |D|")

    p = sub.add_parser("run", parents=[data, algo, single, bench], help="Classify one dataset")
    p.add_argument("--emit-patterns", action="store_true", help="Include pattern lists in the report")
    p.add_argument("--trace-visits", action="store_true", help="Record visited itemsets (fast only)")

    p = sub.add_parser("compare", parents=[data, single, bench], help="Cross-check gen, fast and oracle")
    p.add_argument("--no-oracle", action="store_true", help="Skip the brute-force cross-check")

    p = sub.add_parser("sweep", parents=[data, algo, bench], help="Threshold grid to CSV")
    p.add_argument("--min-util", nargs="+", required=True, help="Values, space or comma separated")
    p.add_argument("--min-fre", nargs="+", required=True, help="Values, space or comma separated")
    p.add_argument("--parallel", type=int, default=0, help="Worker processes (0: sequential)")

    p = sub.add_parser("scale", parents=[data, algo, single, bench], help="Prefix slices to CSV")
    p.add_argument("--slices", nargs="+", required=True, help="Ascending transaction counts")

    p = sub.add_parser("generate", help="Write a synthetic dataset")
    p.add_argument("--transactions", type=int, default=None)
    p.add_argument("--items", type=int, default=None)
    p.add_argument("--avg-len", type=float, default=None)
    p.add_argument("--max-quantity", type=int, default=None)
    p.add_argument("--utility-range", type=int, nargs=2, default=None, metavar=("LO", "HI"))
    p.add_argument("--zipf", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", type=str, default=None)

    p = sub.add_parser("import-spmf", help="Convert an SPMF HUIM file to native format")
    p.add_argument("dataset")
    p.add_argument("--utilities", required=True, metavar="FILE", help="Header-only native file")
    p.add_argument("--out", required=True)

    sub.add_parser("info", parents=[data], help="Describe a dataset")
    sub.add_parser("stats", help="Show the run ledger")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    config = load_config(args.config or os.environ.get("FREQUTIL_CONFIG", "config.yaml"))
    setup_logger(config.log_dir, args.log_level)
    config = _bench_config(config, args)

    try:
        return COMMANDS[args.command](args, config)
    except DatasetParseError as e:
        logger.error(str(e))
        return EXIT_PARSE
    except OSError as e:
        logger.error(f"Cannot read input: {e}")
        return EXIT_PARSE
    except OracleRefusal as e:
        logger.warning(str(e))
        return EXIT_REFUSED
    except (ThresholdError, ValueError) as e:
        logger.error(str(e))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
