import csv
import json

import pytest

from frequtil.algorithms.two_phase import run_gen
from frequtil.errors import RunTimeout
from frequtil.models import RunStats, Thresholds
from frequtil.profiler import Deadline, MemorySampler
from frequtil.report import GRID_FIELDS, build_run_report, grid_row, write_csv, write_json


def test_run_report_field_order(running_db, tmp_path):
    th = Thresholds.parse("15", "3")
    report = run_gen(running_db, th)
    doc = build_run_report("running", running_db, th, th.resolve(running_db), report, emit_patterns=True)
    assert list(doc["parameters"]) == [
        "dataset", "algorithm", "transactions", "min_util", "min_fre",
        "resolved_min_util", "resolved_min_fre", "money_scale",
    ]
    assert list(doc["patterns"]) == ["HFHUI", "HFLUI", "LFHUI"]
    assert doc["patterns"]["LFHUI"][0] == {"itemset": [1, 2, 6], "labels": ["A", "B", "F"],
                                           "utility": 20, "support": 2}

    path = tmp_path / "r.json"
    write_json(doc, str(path))
    assert json.loads(path.read_text()) == doc


def test_grid_row_blanks_counts_on_timeout(running_db):
    th = Thresholds.parse("15", "3")
    row = grid_row("running", running_db, th, None, RunStats("gen", status="timeout"))
    assert list(row) == GRID_FIELDS
    assert row["hfhui"] == "" and row["scan_count"] == ""
    assert row["status"] == "timeout"


def test_csv_round_trip(tmp_path, running_db):
    th = Thresholds.parse("1%", "2")
    rows = [grid_row("running", running_db, th, th.resolve(running_db), RunStats("fast", hfhui=3))]
    path = str(tmp_path / "grid" / "g.csv")
    write_csv(rows, path)
    with open(path, newline="") as f:
        back = list(csv.DictReader(f))
    assert back[0]["min_util"] == "1%"
    assert back[0]["hfhui"] == "3"


def test_deadline_without_limit_never_fires():
    Deadline("x", None).check()


def test_deadline_fires():
    with pytest.raises(RunTimeout):
        Deadline("x", -1.0).check()


def test_memory_sampler_reports_peaks():
    with MemorySampler(interval_ms=1, enabled=True, trace_alloc=True) as sampler:
        blob = [bytes(1024) for _ in range(2000)]
    assert sampler.peak_rss_bytes is not None and sampler.peak_rss_bytes >= 0
    assert sampler.peak_alloc_bytes >= 2000 * 1024
    del blob


def test_memory_sampler_disabled():
    with MemorySampler(enabled=False) as sampler:
        pass
    assert sampler.peak_rss_bytes is None
    assert sampler.peak_alloc_bytes is None
