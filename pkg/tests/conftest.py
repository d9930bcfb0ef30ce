import logging
import random
from pathlib import Path

import pytest

from frequtil.models import QuantitativeDatabase, UtilityTable

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

A, B, C, D, E, F, G = range(1, 8)

RUNNING_UTILITIES = {A: 5, B: 3, C: 2, D: 1, E: 4, F: 2, G: 1}
RUNNING_LABELS = {A: "A", B: "B", C: "C", D: "D", E: "E", F: "F", G: "G"}
RUNNING_ROWS = [
    [(A, 1), (B, 2), (C, 1)],
    [(A, 2), (B, 3), (F, 2)],
    [(B, 2), (D, 2), (E, 2)],
    [(C, 2), (D, 1), (F, 1), (G, 3)],
    [(B, 1), (C, 2), (F, 2), (G, 1)],
]


def _running(drop=()) -> QuantitativeDatabase:
    utilities = {i: v for i, v in RUNNING_UTILITIES.items() if i not in drop}
    labels = {i: s for i, s in RUNNING_LABELS.items() if i not in drop}
    rows = [[(i, q) for i, q in row if i not in drop] for row in RUNNING_ROWS]
    return QuantitativeDatabase.from_rows(rows, UtilityTable(utilities, labels=labels))


@pytest.fixture
def running_db():
    """Seven items A..G, five transactions, TU 13/23/16/10/12."""
    return _running()


@pytest.fixture
def f_less_db():
    """The running example without item F: TU 13/19/16/8/8."""
    return _running(drop={F})


def make_random_db(seed: int, max_items: int = 8, max_transactions: int = 12,
                   max_quantity: int = 5, max_utility: int = 10) -> QuantitativeDatabase:
    rng = random.Random(seed)
    n_items = rng.randint(1, max_items)
    items = list(range(1, n_items + 1))
    utilities = {i: rng.randint(1, max_utility) for i in items}
    rows = []
    for _ in range(rng.randint(1, max_transactions)):
        chosen = rng.sample(items, rng.randint(0, n_items))
        rows.append([(i, rng.randint(1, max_quantity)) for i in chosen])
    return QuantitativeDatabase.from_rows(rows, UtilityTable(utilities))


@pytest.fixture
def random_db():
    return make_random_db


@pytest.fixture
def running_example_path():
    return str(DATA_DIR / "running_example.txt")


@pytest.fixture(autouse=True)
def fresh_logger():
    """Drop handlers bound to a previous test's captured streams."""
    yield
    logger = logging.getLogger("frequtil")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()


@pytest.fixture
def isolated_env(tmp_path, monkeypatch):
    """Point the ledger, logs and config at a temp dir."""
    monkeypatch.setenv("FREQUTIL_DB_PATH", str(tmp_path / "runs.db"))
    monkeypatch.setenv("FREQUTIL_LOG_DIR", str(tmp_path / "logs"))
    monkeypatch.setenv("FREQUTIL_CONFIG", str(tmp_path / "missing.yaml"))
    monkeypatch.chdir(tmp_path)
    return tmp_path
