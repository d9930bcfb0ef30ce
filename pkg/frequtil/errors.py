"""Exception types shared across the package."""

from typing import Optional


class FrequtilError(Exception):
    """Root of every error raised on purpose by frequtil."""


class AbsentItemError(FrequtilError, KeyError):
    def __init__(self, item: int, where: str = "utility table"):
        self.item = item
        self.where = where
        super().__init__(f"item {item} absent from {where}")

    def __str__(self) -> str:
        return self.args[0]


class ThresholdError(FrequtilError, ValueError):
    pass


class ContractViolation(FrequtilError, ValueError):
    pass


class DatasetParseError(FrequtilError, ValueError):
    def __init__(self, message: str, path: Optional[str] = None, line_no: Optional[int] = None):
        self.path = path
        self.line_no = line_no
        self.message = message
        where = path or "<input>"
        if line_no is not None:
            where = f"{where}:{line_no}"
        super().__init__(f"{where}: {message}")


class SpmfImportError(DatasetParseError):
    pass


class OracleRefusal(FrequtilError):
    def __init__(self, item_count: int, max_items: int):
        self.item_count = item_count
        self.max_items = max_items
        super().__init__(
            f"oracle refuses {item_count} items (limit {max_items}, "
            f"{2 ** item_count - 1:,} subsets)"
        )


class RunTimeout(FrequtilError):
    def __init__(self, algorithm: str, elapsed: float, limit: float):
        self.algorithm = algorithm
        self.elapsed = elapsed
        self.limit = limit
        super().__init__(f"[{algorithm}] timed out after {elapsed:.1f}s (limit {limit:g}s)")
