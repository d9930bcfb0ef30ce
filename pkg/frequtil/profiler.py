"""Run instrumentation: cooperative deadlines and peak-memory sampling."""

import logging
import os
import threading
import time
import tracemalloc
from typing import Optional

import psutil

from .errors import RunTimeout

logger = logging.getLogger("frequtil")


class Deadline:
    """Wall-clock budget polled by the algorithms between units of work."""

    def __init__(self, algorithm: str = "", timeout: Optional[float] = None):
        self.algorithm = algorithm
        self.timeout = timeout
        self.start = time.perf_counter()

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self.start

    def check(self):
        if self.timeout is None:
            return
        elapsed = self.elapsed
        if elapsed > self.timeout:
            raise RunTimeout(self.algorithm, elapsed, self.timeout)


class MemorySampler:
    """Samples process RSS on a background thread; optionally traces Python allocations.

    RSS figures are best-effort: they include the interpreter and anything
    allocated before the run, so the peak is reported relative to the
    baseline taken on entry.
    """

    def __init__(self, interval_ms: int = 10, enabled: bool = True, trace_alloc: bool = False):
        self.interval = interval_ms / 1000.0
        self.enabled = enabled
        self.trace_alloc = trace_alloc
        self.peak_rss_bytes: Optional[int] = None
        self.peak_alloc_bytes: Optional[int] = None
        self._process = psutil.Process(os.getpid()) if enabled else None
        self._baseline = 0
        self._peak = 0
        self._stop = threading.Event()
        self._thread: Optional[threading.Thread] = None
        self._started_tracing = False

    def _rss(self) -> int:
        try:
            return self._process.memory_info().rss
        except psutil.Error as e:
            logger.debug(f"RSS sample failed: {e}")
            return self._peak

    def _loop(self):
        while not self._stop.wait(self.interval):
            rss = self._rss()
            if rss > self._peak:
                self._peak = rss

    def __enter__(self) -> "MemorySampler":
        if self.trace_alloc:
            if not tracemalloc.is_tracing():
                tracemalloc.start()
                self._started_tracing = True
            tracemalloc.reset_peak()
        if self.enabled:
            self._baseline = self._peak = self._rss()
            self._thread = threading.Thread(target=self._loop, name="rss-sampler", daemon=True)
            self._thread.start()
        return self

    def __exit__(self, exc_type, exc, tb):
        if self._thread is not None:
            self._stop.set()
            self._thread.join()
            self._peak = max(self._peak, self._rss())
            self.peak_rss_bytes = max(0, self._peak - self._baseline)
        if self.trace_alloc:
            _, peak = tracemalloc.get_traced_memory()
            self.peak_alloc_bytes = peak
            if self._started_tracing:
                tracemalloc.stop()
        return False
