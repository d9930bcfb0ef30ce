"""SQLite ledger of benchmark runs."""

import json
import sqlite3
import threading
from typing import List, Optional, Tuple

from .models import RunStats


class Database:
    def __init__(self, db_path: str = "runs.db"):
        self.db_path = db_path
        self._local = threading.local()
        self._init_db()

    @property
    def _conn(self) -> sqlite3.Connection:
        if not hasattr(self._local, "conn") or self._local.conn is None:
            self._local.conn = sqlite3.connect(self.db_path)
            self._local.conn.row_factory = sqlite3.Row
            self._local.conn.execute("PRAGMA journal_mode=WAL")
        return self._local.conn

    def _init_db(self):
        conn = self._conn
        conn.executescript("""
            CREATE TABLE IF NOT EXISTS runs (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                dataset TEXT NOT NULL,
                algorithm TEXT NOT NULL,
                transactions INTEGER,
                min_util TEXT,
                min_fre TEXT,
                resolved_min_util INTEGER,
                resolved_min_fre INTEGER,
                status TEXT DEFAULT 'ok',
                wall_time_ms REAL,
                peak_rss_bytes INTEGER,
                peak_alloc_bytes INTEGER,
                scan_count INTEGER,
                candidate_count INTEGER,
                fulist_count INTEGER,
                level_sizes TEXT DEFAULT '[]',
                hfhui INTEGER,
                hflui INTEGER,
                lfhui INTEGER,
                error TEXT,
                created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
            );

            CREATE INDEX IF NOT EXISTS idx_runs_dataset ON runs(dataset);
            CREATE INDEX IF NOT EXISTS idx_runs_algorithm ON runs(algorithm);
        """)
        conn.commit()

    def insert_run(self, dataset: str, stats: RunStats, min_util: str = "", min_fre: str = "",
                   resolved: Optional[Tuple[int, int]] = None, transactions: Optional[int] = None,
                   error: Optional[str] = None) -> int:
        resolved_util, resolved_fre = resolved if resolved is not None else (None, None)
        cur = self._conn.execute(
            """INSERT INTO runs (dataset, algorithm, transactions, min_util, min_fre,
                                 resolved_min_util, resolved_min_fre, status, wall_time_ms,
                                 peak_rss_bytes, peak_alloc_bytes, scan_count, candidate_count,
                                 fulist_count, level_sizes, hfhui, hflui, lfhui, error)
               VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)""",
            (dataset, stats.algorithm, transactions, min_util, min_fre,
             resolved_util, resolved_fre, stats.status, stats.wall_time_ms,
             stats.peak_rss_bytes, stats.peak_alloc_bytes, stats.scan_count,
             stats.candidate_count, stats.fulist_count, json.dumps(stats.level_sizes),
             stats.hfhui, stats.hflui, stats.lfhui, error),
        )
        self._conn.commit()
        return cur.lastrowid

    def get_runs(self, dataset: str = None, algorithm: str = None) -> List[dict]:
        query = "SELECT * FROM runs WHERE 1=1"
        params = []
        if dataset:
            query += " AND dataset = ?"
            params.append(dataset)
        if algorithm:
            query += " AND algorithm = ?"
            params.append(algorithm)
        query += " ORDER BY id"
        rows = self._conn.execute(query, params).fetchall()
        runs = []
        for r in rows:
            run = dict(r)
            run["level_sizes"] = json.loads(run["level_sizes"] or "[]")
            runs.append(run)
        return runs

    def get_stats(self) -> List[Tuple]:
        rows = self._conn.execute(
            """SELECT dataset, algorithm, status, COUNT(*) as cnt,
                      COALESCE(AVG(wall_time_ms), 0) as avg_ms,
                      COALESCE(MAX(peak_rss_bytes), 0) as max_rss
               FROM runs GROUP BY dataset, algorithm, status
               ORDER BY dataset, algorithm, status"""
        ).fetchall()
        return [tuple(r) for r in rows]

    def close(self):
        conn = getattr(self._local, "conn", None)
        if conn is not None:
            conn.close()
            self._local.conn = None
