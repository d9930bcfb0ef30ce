import csv
import json

import pytest

from frequtil.db import Database
from frequtil.main import (
    EXIT_DIFF,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_REFUSED,
    EXIT_TIMEOUT,
    EXIT_USAGE,
    main,
)


@pytest.fixture
def dataset(isolated_env, running_example_path):
    return running_example_path


def _json(path):
    with open(path) as f:
        return json.load(f)


def test_run_gen_writes_report(dataset, isolated_env):
    out = isolated_env / "report.json"
    code = main(["run", dataset, "--algo", "gen", "--min-util", "15", "--min-fre", "3",
                 "--out", str(out), "--emit-patterns"])
    assert code == EXIT_OK
    doc = _json(out)
    assert list(doc) == ["parameters", "stats", "patterns"]
    assert doc["parameters"]["resolved_min_util"] == 15
    assert doc["parameters"]["money_scale"] == 1
    stats = doc["stats"]
    assert (stats["hfhui"], stats["hflui"], stats["lfhui"]) == (4, 6, 2)
    assert stats["memory_best_effort"] is True
    hfhui = doc["patterns"]["HFHUI"]
    assert [p["labels"] for p in hfhui] == [["A"], ["A", "B"], ["B"], ["B", "F"]]
    assert len(doc["patterns"]["LFHUI"]) == stats["lfhui"]


def test_run_to_stdout_without_patterns(dataset, capsys):
    code = main(["run", dataset, "--min-util", "200%", "--min-fre", "200%"])
    assert code == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert "patterns" not in doc
    assert doc["stats"]["algorithm"] == "fast"
    assert (doc["stats"]["hfhui"], doc["stats"]["hflui"], doc["stats"]["lfhui"]) == (0, 0, 0)


def test_run_records_ledger(dataset, isolated_env):
    main(["run", dataset, "--min-util", "15", "--min-fre", "3", "--out", str(isolated_env / "r.json")])
    runs = Database(str(isolated_env / "runs.db")).get_runs()
    assert len(runs) == 1
    assert runs[0]["dataset"] == "running_example.txt"
    assert runs[0]["min_util"] == "15"


def test_run_timeout_exit_code(dataset, isolated_env):
    code = main(["run", dataset, "--algo", "gen", "--min-util", "15", "--min-fre", "3",
                 "--timeout", "-1", "--out", str(isolated_env / "r.json")])
    assert code == EXIT_TIMEOUT
    doc = _json(isolated_env / "r.json")
    assert doc["stats"]["status"] == "timeout"
    assert "timed out" in doc["error"]


def test_oracle_refusal_exit_code(isolated_env):
    path = isolated_env / "wide.txt"
    header = "".join(f"@ITEM {i} 1\n" for i in range(1, 31))
    path.write_text(header + " ".join(f"{i}:1" for i in range(1, 31)) + "\n")
    code = main(["run", str(path), "--algo", "oracle", "--min-util", "1", "--min-fre", "1"])
    assert code == EXIT_REFUSED


def test_parse_error_exit_code(isolated_env):
    path = isolated_env / "bad.txt"
    path.write_text("@ITEM 1 2\n1:1 9:1\n")
    code = main(["run", str(path), "--min-util", "1", "--min-fre", "1"])
    assert code == EXIT_PARSE


def test_invalid_utf8_is_parse_error(isolated_env):
    path = isolated_env / "latin.txt"
    path.write_bytes(b"@ITEM 1 1\n1:1 \xff\xfe\n")
    code = main(["run", str(path), "--min-util", "1", "--min-fre", "1"])
    assert code == EXIT_PARSE


def test_missing_dataset_exit_code(isolated_env):
    assert main(["info", str(isolated_env / "nope.txt")]) == EXIT_PARSE


@pytest.mark.parametrize("argv", [
    [],
    ["run"],
    ["run", "x.txt", "--min-util", "15"],
    ["run", "x.txt", "--algo", "nope", "--min-util", "1", "--min-fre", "1"],
    ["frobnicate"],
])
def test_usage_errors_exit_one(isolated_env, argv):
    assert main(argv) == EXIT_USAGE


def test_bad_threshold_is_usage_error(dataset):
    assert main(["run", dataset, "--min-util", "-5", "--min-fre", "3"]) == EXIT_USAGE


def test_compare_clean(dataset, isolated_env):
    out = isolated_env / "cmp.json"
    assert main(["compare", dataset, "--min-util", "15", "--min-fre", "3", "--out", str(out)]) == EXIT_OK
    doc = _json(out)
    assert doc["identical"] is True
    assert list(doc["algorithms"]) == ["gen", "fast", "oracle"]


def test_compare_diff_exit_code(dataset, isolated_env, monkeypatch):
    import frequtil.main as cli
    from frequtil import bench

    def corrupting_compare(*args, **kwargs):
        def hook(algo, report):
            if algo == "gen":
                report.lfhui = []
            return report
        kwargs["report_hook"] = hook
        return bench.compare(*args, **kwargs)

    monkeypatch.setattr(cli, "compare", corrupting_compare)
    code = main(["compare", dataset, "--min-util", "15", "--min-fre", "3",
                 "--out", str(isolated_env / "cmp.json")])
    assert code == EXIT_DIFF


def test_sweep_csv(dataset, isolated_env):
    out = isolated_env / "grid.csv"
    code = main(["sweep", dataset, "--algo", "gen", "--min-fre", "2,3", "--min-util", "10", "15",
                 "--out", str(out)])
    assert code == EXIT_OK
    with open(out, newline="") as f:
        rows = list(csv.DictReader(f))
    assert [(r["min_fre"], r["min_util"]) for r in rows] == [("2", "10"), ("2", "15"), ("3", "10"), ("3", "15")]
    assert (rows[3]["hfhui"], rows[3]["hflui"], rows[3]["lfhui"]) == ("4", "6", "2")


def test_sweep_empty_list_is_error(dataset):
    assert main(["sweep", dataset, "--min-fre", ",", "--min-util", "15"]) == EXIT_USAGE


def test_scale_csv(dataset, isolated_env):
    out = isolated_env / "scale.csv"
    code = main(["scale", dataset, "--min-util", "15", "--min-fre", "3", "--slices", "2", "5",
                 "--out", str(out)])
    assert code == EXIT_OK
    with open(out, newline="") as f:
        rows = list(csv.DictReader(f))
    assert [r["transactions"] for r in rows] == ["2", "5"]
    assert (rows[1]["hfhui"], rows[1]["hflui"], rows[1]["lfhui"]) == ("4", "6", "2")


def test_scale_zero_slice_is_error(dataset):
    assert main(["scale", dataset, "--min-util", "15", "--min-fre", "3", "--slices", "0"]) == EXIT_USAGE


def test_generate_then_info(isolated_env, capsys):
    out = isolated_env / "gen.txt"
    code = main(["generate", "--transactions", "50", "--items", "12", "--avg-len", "3",
                 "--seed", "9", "--out", str(out)])
    assert code == EXIT_OK
    assert out.exists()
    capsys.readouterr()
    assert main(["info", str(out)]) == EXIT_OK
    printed = capsys.readouterr().out
    assert "Transactions" in printed and "50" in printed


def test_generate_rejects_bad_config(isolated_env):
    assert main(["generate", "--items", "3", "--avg-len", "8", "--out", str(isolated_env / "g.txt")]) == EXIT_USAGE


def test_import_spmf_then_run(isolated_env):
    header = isolated_env / "items.txt"
    header.write_text("@ITEM 1 3\n@ITEM 2 2\n")
    spmf = isolated_env / "db.spmf"
    spmf.write_text("1 2:10:6 4\n2:4:4\n")
    native = isolated_env / "db.txt"
    assert main(["import-spmf", str(spmf), "--utilities", str(header), "--out", str(native)]) == EXIT_OK
    assert native.read_text().splitlines() == ["@ITEM 1 3", "@ITEM 2 2", "1:2 2:2", "2:2"]

    out = isolated_env / "r.json"
    code = main(["run", str(spmf), "--spmf-utilities", str(header), "--min-util", "0",
                 "--min-fre", "0", "--out", str(out)])
    assert code == EXIT_OK
    assert _json(out)["stats"]["hfhui"] == 3


def test_stats_prints_ledger(dataset, isolated_env, capsys):
    main(["run", dataset, "--min-util", "15", "--min-fre", "3", "--out", str(isolated_env / "r.json")])
    capsys.readouterr()
    assert main(["stats"]) == EXIT_OK
    printed = capsys.readouterr().out
    assert "RUN STATISTICS" in printed
    assert "running_example.txt" in printed


def test_run_trace_visits_in_report(dataset, isolated_env):
    out = isolated_env / "r.json"
    code = main(["run", dataset, "--algo", "fast", "--min-util", "15", "--min-fre", "3",
                 "--trace-visits", "--out", str(out)])
    assert code == EXIT_OK
    visited = _json(out)["visited"]
    assert [2, 4, 5] in visited
    assert [1, 7] not in visited
    assert visited == sorted(visited)


def test_run_without_trace_has_no_visited(dataset, isolated_env):
    out = isolated_env / "r.json"
    main(["run", dataset, "--min-util", "15", "--min-fre", "3", "--out", str(out)])
    assert "visited" not in _json(out)
