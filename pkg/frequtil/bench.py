"""Benchmark orchestration: single runs, cross-checks, threshold grids, scalability slices."""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .algorithms import ALL_ALGORITHMS
from .config import AppConfig
from .db import Database
from .errors import OracleRefusal, RunTimeout
from .models import (
    REPORTED_CLASSES,
    ClassificationReport,
    QuantitativeDatabase,
    ResolvedThresholds,
    RunStats,
    Thresholds,
)
from .report import grid_row, stats_to_dict

logger = logging.getLogger("frequtil")

ReportHook = Callable[[str, ClassificationReport], ClassificationReport]


@dataclass
class RunResult:
    algorithm: str
    thresholds: Thresholds
    resolved: ResolvedThresholds
    stats: RunStats
    report: Optional[ClassificationReport] = None
    error: Optional[str] = None

    @property
    def timed_out(self) -> bool:
        return self.stats.status == "timeout"


def run_algorithm(algo: str, db: QuantitativeDatabase, thresholds: Thresholds,
                  config: AppConfig, **overrides) -> ClassificationReport:
    """Run one registered algorithm; RunTimeout and OracleRefusal propagate."""
    try:
        cls = ALL_ALGORITHMS[algo]
    except KeyError:
        raise ValueError(f"unknown algorithm {algo!r}, choose from {', '.join(ALL_ALGORITHMS)}") from None
    return cls.from_config(config, **overrides).run(db, thresholds)


def _record(ledger: Optional[Database], dataset: str, result: RunResult, transactions: int):
    if ledger is None:
        return
    min_util, min_fre = result.thresholds.describe()
    ledger.insert_run(
        dataset, result.stats, min_util, min_fre,
        resolved=tuple(result.resolved), transactions=transactions, error=result.error,
    )


def execute(algo: str, db: QuantitativeDatabase, thresholds: Thresholds, config: AppConfig,
            dataset: str = "", ledger: Optional[Database] = None, **overrides) -> RunResult:
    """run_algorithm with timeouts turned into a recorded result.

    An oracle refusal is recorded with status "refused" and re-raised.
    """
    resolved = thresholds.resolve(db)
    try:
        report = run_algorithm(algo, db, thresholds, config, **overrides)
        result = RunResult(algo, thresholds, resolved, report.stats, report)
    except OracleRefusal as e:
        _record(ledger, dataset, RunResult(algo, thresholds, resolved, RunStats(algo, status="refused"),
                                           error=str(e)), len(db))
        raise
    except RunTimeout as e:
        logger.warning(str(e))
        stats = RunStats(algo, status="timeout", wall_time_ms=e.elapsed * 1000)
        result = RunResult(algo, thresholds, resolved, stats, error=str(e))
    _record(ledger, dataset, result, len(db))
    return result


@dataclass
class CompareResult:
    thresholds: Thresholds
    resolved: ResolvedThresholds
    results: Dict[str, RunResult] = field(default_factory=dict)
    skipped: List[str] = field(default_factory=list)
    # "a-b" -> class -> {"only_a": [...], "only_b": [...]}
    diffs: Dict[str, Dict[str, Dict[str, list]]] = field(default_factory=dict)

    @property
    def timeouts(self) -> List[str]:
        return [algo for algo, r in self.results.items() if r.timed_out]

    @property
    def clean(self) -> bool:
        return not any(
            sides["only_a"] or sides["only_b"]
            for per_class in self.diffs.values()
            for sides in per_class.values()
        )

    def to_dict(self, dataset: str, db: QuantitativeDatabase) -> Dict:
        min_util, min_fre = self.thresholds.describe()
        return {
            "parameters": {
                "dataset": dataset,
                "transactions": len(db),
                "min_util": min_util,
                "min_fre": min_fre,
                "resolved_min_util": self.resolved.min_util,
                "resolved_min_fre": self.resolved.min_fre,
                "money_scale": db.utilities.scale,
            },
            "algorithms": {algo: stats_to_dict(r.stats) for algo, r in self.results.items()},
            "skipped": list(self.skipped),
            "timeouts": self.timeouts,
            "identical": self.clean,
            "diffs": self.diffs,
        }


def diff_reports(a: ClassificationReport, b: ClassificationReport) -> Dict[str, Dict[str, list]]:
    sets_a, sets_b = a.as_sets(), b.as_sets()
    out = {}
    for cls in REPORTED_CLASSES:
        def listed(patterns):
            return [
                {"itemset": list(x), "utility": u, "support": s}
                for x, u, s in sorted(patterns)
            ]
        out[cls.value] = {
            "only_a": listed(sets_a[cls] - sets_b[cls]),
            "only_b": listed(sets_b[cls] - sets_a[cls]),
        }
    return out


def compare(db: QuantitativeDatabase, thresholds: Thresholds, config: AppConfig,
            dataset: str = "", ledger: Optional[Database] = None, include_oracle: bool = True,
            report_hook: Optional[ReportHook] = None) -> CompareResult:
    """Run gen, fast and (when the item count allows) the oracle, and diff every pair.

    report_hook may replace a report before diffing; tests use it to inject faults.
    """
    result = CompareResult(thresholds, thresholds.resolve(db))
    algos = ["gen", "fast"]
    if include_oracle:
        item_count = len(db.items())
        if item_count <= config.oracle.max_items:
            algos.append("oracle")
        else:
            logger.warning(
                f"[oracle] Skipped: {item_count} items exceeds the limit of {config.oracle.max_items}"
            )
            result.skipped.append("oracle")

    for algo in algos:
        run = execute(algo, db, thresholds, config, dataset, ledger)
        if run.report is not None and report_hook is not None:
            run.report = report_hook(algo, run.report)
        result.results[algo] = run

    finished = [algo for algo in algos if result.results[algo].report is not None]
    for a, b in combinations(finished, 2):
        result.diffs[f"{a}-{b}"] = diff_reports(result.results[a].report, result.results[b].report)

    if result.clean:
        logger.info(f"Compare: {', '.join(finished)} agree on {dataset or 'dataset'}")
    else:
        logger.warning(f"Compare: classification mismatch on {dataset or 'dataset'}")
    return result


def _sweep_cell(args: Tuple[str, QuantitativeDatabase, Thresholds, AppConfig]) -> RunResult:
    algo, db, thresholds, config = args
    run = execute(algo, db, thresholds, config)
    run.report = None  # only stats travel back across the process boundary
    return run


def sweep(db: QuantitativeDatabase, fre_list: Sequence[str], util_list: Sequence[str], algo: str,
          config: AppConfig, dataset: str = "", ledger: Optional[Database] = None,
          parallel: int = 0) -> List[Dict]:
    """One grid row per (min_fre, min_util) pair; a timed-out cell is recorded and skipped."""
    if not fre_list or not util_list:
        raise ValueError("sweep needs at least one min_fre and one min_util value")
    cells = [Thresholds.parse(util, fre) for fre in fre_list for util in util_list]
    logger.info(f"[{algo}] Sweep: {len(cells)} cells on {dataset or 'dataset'}")

    if parallel and parallel > 1:
        # RSS of a worker process says nothing useful about one cell
        cell_config = replace(config, bench=replace(config.bench, sample_memory=False))
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            results = list(pool.map(_sweep_cell, [(algo, db, th, cell_config) for th in cells]))
        for r in results:
            _record(ledger, dataset, r, len(db))
    else:
        results = []
        for th in cells:
            run = execute(algo, db, th, config, dataset, ledger)
            run.report = None
            results.append(run)

    is_parallel = bool(parallel and parallel > 1)
    return [grid_row(dataset, db, r.thresholds, r.resolved, r.stats, is_parallel) for r in results]


def validate_slices(slices: Sequence[int], size: int) -> List[int]:
    if not slices:
        raise ValueError("at least one slice size is required")
    out = []
    for n in slices:
        if n < 1:
            raise ValueError(f"slice size must be positive, got {n}")
        if n > size:
            raise ValueError(f"slice size {n} exceeds the database size {size}")
        if out and n <= out[-1]:
            raise ValueError(f"slice sizes must be ascending ({n} after {out[-1]})")
        out.append(n)
    return out


def scale(db: QuantitativeDatabase, slices: Sequence[int], algo: str, thresholds: Thresholds,
          config: AppConfig, dataset: str = "", ledger: Optional[Database] = None) -> List[Dict]:
    """Run on growing prefixes of the transaction list; relative thresholds follow each prefix."""
    rows = []
    for n in validate_slices(slices, len(db)):
        part = db.head(n)
        logger.info(f"[{algo}] Scale: {n:,} of {len(db):,} transactions")
        run = execute(algo, part, thresholds, config, dataset, ledger)
        rows.append(grid_row(dataset, part, thresholds, run.resolved, run.stats))
    return rows
