"""Abstract base class for all classifiers."""

import logging
import time
from abc import ABC, abstractmethod
from typing import Optional, Union

from ..config import AppConfig
from ..models import (
    ClassificationReport,
    QuantitativeDatabase,
    ResolvedThresholds,
    Thresholds,
    resolve_thresholds,
)
from ..profiler import Deadline, MemorySampler

logger = logging.getLogger("frequtil")


class BaseClassifier(ABC):
    name: str = ""

    def __init__(self, timeout: Optional[float] = None, sample_memory: bool = False,
                 memory_interval_ms: int = 10, trace_alloc: bool = False):
        self.timeout = timeout
        self.sample_memory = sample_memory
        self.memory_interval_ms = memory_interval_ms
        self.trace_alloc = trace_alloc
        self.deadline = Deadline(self.name, timeout)

    @classmethod
    def from_config(cls, config: AppConfig, **kwargs) -> "BaseClassifier":
        bench = config.bench
        options = dict(
            timeout=bench.timeout,
            sample_memory=bench.sample_memory,
            memory_interval_ms=bench.memory_interval_ms,
            trace_alloc=bench.trace_alloc,
        )
        options.update(kwargs)
        return cls(**options)

    @abstractmethod
    def classify(self, db: QuantitativeDatabase, th: ResolvedThresholds) -> ClassificationReport:
        """Return the HFHUI/HFLUI/LFHUI patterns of db under absolute thresholds."""
        ...

    def run(self, db: QuantitativeDatabase,
            thresholds: Union[Thresholds, ResolvedThresholds]) -> ClassificationReport:
        """Resolve thresholds, classify, and fill in timing and memory stats.

        Raises RunTimeout when the configured budget runs out.
        """
        th = resolve_thresholds(thresholds, db)
        logger.info(
            f"[{self.name}] Starting: {len(db):,} transactions, "
            f"min_util={th.min_util}, min_fre={th.min_fre}"
        )

        self.deadline = Deadline(self.name, self.timeout)
        sampler = MemorySampler(self.memory_interval_ms, enabled=self.sample_memory,
                                trace_alloc=self.trace_alloc)
        start = time.perf_counter()
        with sampler:
            report = self.classify(db, th)
        elapsed_ms = (time.perf_counter() - start) * 1000

        stats = report.stats
        stats.wall_time_ms = elapsed_ms
        stats.peak_rss_bytes = sampler.peak_rss_bytes
        stats.peak_alloc_bytes = sampler.peak_alloc_bytes
        report.finalize()

        logger.info(
            f"[{self.name}] Done: {stats.hfhui} HFHUI, {stats.hflui} HFLUI, {stats.lfhui} LFHUI "
            f"in {elapsed_ms:,.1f} ms ({stats.scan_count} scans)"
        )
        return report
