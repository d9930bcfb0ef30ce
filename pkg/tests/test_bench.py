from dataclasses import replace

import pytest

from frequtil.bench import compare, diff_reports, execute, scale, sweep, validate_slices
from frequtil.config import AppConfig, BenchConfig, OracleConfig
from frequtil.db import Database
from frequtil.errors import OracleRefusal
from frequtil.generator import GeneratorConfig, generate
from frequtil.models import ClassificationReport, RunStats, Thresholds

A, B, C, D, E, F, G = range(1, 8)


@pytest.fixture
def config():
    return AppConfig(bench=BenchConfig(sample_memory=False, record_runs=False))


@pytest.fixture
def generated_db():
    return generate(GeneratorConfig(transaction_count=400, item_universe_size=30,
                                    average_transaction_length=4, seed=3))


def test_compare_running_example_is_clean(running_db, config):
    result = compare(running_db, Thresholds.parse("15", "3"), config, "running")
    assert result.clean
    assert list(result.results) == ["gen", "fast", "oracle"]
    assert set(result.diffs) == {"gen-fast", "gen-oracle", "fast-oracle"}
    assert result.timeouts == []


def test_compare_detects_injected_fault(running_db, config):
    def drop_first_hfhui(algo, report):
        if algo == "fast":
            report.hfhui = report.hfhui[1:]
        return report

    result = compare(running_db, Thresholds.parse("15", "3"), config, report_hook=drop_first_hfhui)
    assert not result.clean
    only_gen = result.diffs["gen-fast"]["HFHUI"]["only_a"]
    assert only_gen == [{"itemset": [A], "utility": 15, "support": 3}]
    assert result.diffs["gen-oracle"]["HFHUI"] == {"only_a": [], "only_b": []}


def test_compare_skips_oracle_over_limit(running_db, config):
    config = replace(config, oracle=OracleConfig(max_items=3))
    result = compare(running_db, Thresholds.parse("15", "3"), config)
    assert result.skipped == ["oracle"]
    assert list(result.results) == ["gen", "fast"]
    assert result.clean


def test_compare_reports_timeouts(running_db, config):
    config = replace(config, bench=replace(config.bench, timeout=-1.0))
    result = compare(running_db, Thresholds.parse("15", "3"), config)
    assert set(result.timeouts) == {"gen", "fast", "oracle"}
    assert result.diffs == {}


def test_diff_reports_empty_for_identical():
    report = ClassificationReport(RunStats("x"))
    diffs = diff_reports(report, report)
    assert all(not sides["only_a"] and not sides["only_b"] for sides in diffs.values())


def test_execute_records_timeout(running_db, config, tmp_path):
    ledger = Database(str(tmp_path / "runs.db"))
    config = replace(config, bench=replace(config.bench, timeout=-1.0))
    result = execute("gen", running_db, Thresholds.parse("15", "3"), config, "running", ledger)
    assert result.timed_out
    assert result.report is None
    runs = ledger.get_runs()
    assert [(r["algorithm"], r["status"]) for r in runs] == [("gen", "timeout")]


def test_single_cell_sweep_matches_run(running_db, config):
    rows = sweep(running_db, ["3"], ["15"], "gen", config, "running")
    assert len(rows) == 1
    row = rows[0]
    assert (row["hfhui"], row["hflui"], row["lfhui"]) == (4, 6, 2)
    assert row["parallel"] == "false"
    assert row["resolved_min_util"] == 15


def test_sweep_grid_is_monotone(generated_db, config):
    utils = ["0.5%", "1%", "2%", "4%"]
    rows = sweep(generated_db, ["1%", "2%", "4%", "8%"], utils, "fast", config)
    assert len(rows) == 16
    by_fre = {}
    for row in rows:
        by_fre.setdefault(row["min_fre"], []).append(row)
    for cells in by_fre.values():
        assert [c["min_util"] for c in cells] == utils
        high = [c["hfhui"] + c["lfhui"] for c in cells]
        assert high == sorted(high, reverse=True)


def test_sweep_rejects_empty_lists(running_db, config):
    with pytest.raises(ValueError):
        sweep(running_db, [], ["15"], "gen", config)
    with pytest.raises(ValueError):
        sweep(running_db, ["3"], [], "gen", config)


def test_parallel_sweep_matches_sequential(running_db, config):
    sequential = sweep(running_db, ["2", "3"], ["10", "15"], "fast", config)
    parallel = sweep(running_db, ["2", "3"], ["10", "15"], "fast", config, parallel=2)
    key = lambda r: (r["min_fre"], r["min_util"], r["hfhui"], r["hflui"], r["lfhui"])
    assert [key(r) for r in parallel] == [key(r) for r in sequential]
    assert all(r["parallel"] == "true" for r in parallel)


def test_scale_rows(generated_db, config):
    rows = scale(generated_db, [100, 200, 400], "fast", Thresholds.parse("1%", "2%"), config)
    assert [r["transactions"] for r in rows] == [100, 200, 400]
    # percentages follow the slice
    assert rows[0]["resolved_min_fre"] == 2
    assert rows[2]["resolved_min_fre"] == 8


@pytest.mark.parametrize("slices", [[], [0], [10, 5], [3, 3], [1000]])
def test_validate_slices_rejects(slices):
    with pytest.raises(ValueError):
        validate_slices(slices, 400)


def test_sweep_grid_is_monotone_in_min_fre(generated_db, config):
    fres = ["1%", "2%", "4%", "8%"]
    rows = sweep(generated_db, fres, ["0.5%", "1%", "2%", "4%"], "fast", config)
    by_util = {}
    for row in rows:
        by_util.setdefault(row["min_util"], []).append(row)
    for cells in by_util.values():
        assert [c["min_fre"] for c in cells] == fres
        frequent = [c["hfhui"] + c["hflui"] for c in cells]
        assert frequent == sorted(frequent, reverse=True)


def test_execute_records_oracle_refusal(running_db, config, tmp_path):
    ledger = Database(str(tmp_path / "runs.db"))
    config = replace(config, oracle=OracleConfig(max_items=3))
    with pytest.raises(OracleRefusal):
        execute("oracle", running_db, Thresholds.parse("15", "3"), config, "running", ledger)
    runs = ledger.get_runs()
    assert [(r["algorithm"], r["status"]) for r in runs] == [("oracle", "refused")]
    assert "limit 3" in runs[0]["error"]
