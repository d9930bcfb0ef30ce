"""JSON run reports and CSV grids.

Utilities are written as integers in the table's smallest money unit;
`money_scale` says how many units make one whole unit.
"""

import csv
import json
import os
import sys
from dataclasses import asdict
from typing import Dict, Iterable, Optional, Sequence

from .models import (
    REPORTED_CLASSES,
    ClassificationReport,
    ClassifiedPattern,
    QuantitativeDatabase,
    ResolvedThresholds,
    RunStats,
    Thresholds,
)

STATS_FIELDS = [
    "algorithm", "status", "wall_time_ms", "peak_rss_bytes", "peak_alloc_bytes",
    "memory_best_effort", "scan_count", "candidate_count", "fulist_count",
    "level_sizes", "max_depth", "hfhui", "hflui", "lfhui",
]

GRID_FIELDS = [
    "dataset", "transactions", "min_util", "min_fre", "resolved_min_util", "resolved_min_fre",
    "algorithm", "status", "wall_time_ms", "peak_rss_bytes", "peak_alloc_bytes",
    "scan_count", "candidate_count", "fulist_count", "hfhui", "hflui", "lfhui", "parallel",
]


def stats_to_dict(stats: RunStats) -> Dict:
    raw = asdict(stats)
    return {k: raw[k] for k in STATS_FIELDS}


def pattern_to_dict(p: ClassifiedPattern, db: QuantitativeDatabase) -> Dict:
    table = db.utilities
    doc = {"itemset": list(p.itemset)}
    if table.labels:
        doc["labels"] = [table.label(i) for i in p.itemset]
    doc["utility"] = p.utility
    doc["support"] = p.support
    return doc


def build_run_report(dataset: str, db: QuantitativeDatabase, thresholds: Thresholds,
                     resolved: ResolvedThresholds, report: ClassificationReport,
                     emit_patterns: bool = False) -> Dict:
    min_util, min_fre = thresholds.describe()
    doc = {
        "parameters": {
            "dataset": dataset,
            "algorithm": report.stats.algorithm,
            "transactions": len(db),
            "min_util": min_util,
            "min_fre": min_fre,
            "resolved_min_util": resolved.min_util,
            "resolved_min_fre": resolved.min_fre,
            "money_scale": db.utilities.scale,
        },
        "stats": stats_to_dict(report.stats),
    }
    if emit_patterns:
        doc["patterns"] = {
            cls.value: [pattern_to_dict(p, db) for p in report.patterns(cls)]
            for cls in REPORTED_CLASSES
        }
    if report.visited is not None:
        doc["visited"] = [list(x) for x in sorted(report.visited)]
    return doc


def grid_row(dataset: str, db: QuantitativeDatabase, thresholds: Thresholds,
             resolved: Optional[ResolvedThresholds], stats: RunStats,
             parallel: bool = False) -> Dict:
    min_util, min_fre = thresholds.describe()
    ok = stats.status == "ok"
    return {
        "dataset": dataset,
        "transactions": len(db),
        "min_util": min_util,
        "min_fre": min_fre,
        "resolved_min_util": resolved.min_util if resolved else "",
        "resolved_min_fre": resolved.min_fre if resolved else "",
        "algorithm": stats.algorithm,
        "status": stats.status,
        "wall_time_ms": round(stats.wall_time_ms, 3),
        "peak_rss_bytes": "" if stats.peak_rss_bytes is None else stats.peak_rss_bytes,
        "peak_alloc_bytes": "" if stats.peak_alloc_bytes is None else stats.peak_alloc_bytes,
        "scan_count": stats.scan_count if ok else "",
        "candidate_count": stats.candidate_count if ok else "",
        "fulist_count": stats.fulist_count if ok else "",
        "hfhui": stats.hfhui if ok else "",
        "hflui": stats.hflui if ok else "",
        "lfhui": stats.lfhui if ok else "",
        "parallel": "true" if parallel else "false",
    }


def _open_out(path: Optional[str]):
    if not path or path == "-":
        return sys.stdout, False
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    return open(path, "w", encoding="utf-8", newline=""), True


def write_json(doc: Dict, path: Optional[str] = None):
    f, close = _open_out(path)
    try:
        json.dump(doc, f, indent=2)
        f.write("\n")
    finally:
        if close:
            f.close()


def write_csv(rows: Iterable[Dict], path: Optional[str] = None,
              fields: Sequence[str] = GRID_FIELDS):
    f, close = _open_out(path)
    try:
        writer = csv.DictWriter(f, fieldnames=list(fields), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    finally:
        if close:
            f.close()
