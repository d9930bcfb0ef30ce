"""Data models for the classifier."""

from dataclasses import dataclass, field
from decimal import ROUND_CEILING, Decimal, InvalidOperation
from enum import Enum
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Set, Tuple, Union

from .errors import AbsentItemError, ThresholdError

Itemset = Tuple[int, ...]
Number = Union[int, float, str, Decimal]


def make_itemset(items: Iterable[int]) -> Itemset:
    """Canonical form: ascending, duplicate-free, non-empty."""
    itemset = tuple(sorted(set(int(i) for i in items)))
    if not itemset:
        raise ValueError("itemset must contain at least one item")
    return itemset


def _ceil(value: Decimal) -> int:
    return int(value.to_integral_value(rounding=ROUND_CEILING))


@dataclass(frozen=True)
class UtilityTable:
    # External utilities in the smallest money unit; `scale` units make one whole unit.
    values: Mapping[int, int]
    scale: int = 1
    labels: Mapping[int, str] = field(default_factory=dict)

    def __post_init__(self):
        values = {int(k): int(v) for k, v in self.values.items()}
        for item, v in values.items():
            if item < 0:
                raise ValueError(f"item id must be non-negative, got {item}")
            if v <= 0:
                raise ValueError(f"external utility of item {item} must be positive, got {v}")
        if self.scale < 1:
            raise ValueError(f"money scale must be >= 1, got {self.scale}")
        # normalised: no power of ten divides the scale and every value
        scale = self.scale
        while scale % 10 == 0 and all(v % 10 == 0 for v in values.values()):
            scale //= 10
            values = {item: v // 10 for item, v in values.items()}
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", dict(self.labels))

    @classmethod
    def from_amounts(cls, amounts: Mapping[int, Number],
                     labels: Optional[Mapping[int, str]] = None) -> "UtilityTable":
        """Build a table from decimal money amounts, picking the smallest exact scale."""
        decimals = {}
        for item, amount in amounts.items():
            try:
                d = Decimal(str(amount)).normalize()
            except InvalidOperation:
                raise ValueError(f"external utility of item {item} is not a number: {amount!r}") from None
            decimals[int(item)] = d
        digits = max((-d.as_tuple().exponent for d in decimals.values()), default=0)
        scale = 10 ** max(digits, 0)
        values = {item: int(d * scale) for item, d in decimals.items()}
        return cls(values=values, scale=scale, labels=labels or {})

    def __getitem__(self, item: int) -> int:
        try:
            return self.values[item]
        except KeyError:
            raise AbsentItemError(item) from None

    def __contains__(self, item: int) -> bool:
        return item in self.values

    def __len__(self) -> int:
        return len(self.values)

    def items(self) -> List[int]:
        return sorted(self.values)

    def label(self, item: int) -> str:
        return self.labels.get(item, str(item))

    def itemset_utility(self, itemset: Iterable[int]) -> int:
        """v(X): the sum of external utilities of the items in X."""
        return sum(self[i] for i in itemset)

    def amount(self, units: int) -> Decimal:
        """Smallest-unit integer back to a money amount."""
        return (Decimal(units) / self.scale).normalize() if self.scale != 1 else Decimal(units)


@dataclass(frozen=True)
class Transaction:
    tid: int
    entries: Tuple[Tuple[int, int], ...]
    quantities: Dict[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.tid < 1:
            raise ValueError(f"tid must be positive, got {self.tid}")
        entries = tuple(sorted((int(i), int(q)) for i, q in self.entries))
        quantities = dict(entries)
        if len(quantities) != len(entries):
            raise ValueError(f"duplicate item in transaction {self.tid}")
        for item, qty in entries:
            if qty < 1:
                raise ValueError(f"quantity of item {item} in transaction {self.tid} must be >= 1")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "quantities", quantities)

    @property
    def items(self) -> Tuple[int, ...]:
        return tuple(i for i, _ in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def quantity(self, item: int) -> int:
        try:
            return self.quantities[item]
        except KeyError:
            raise AbsentItemError(item, f"transaction {self.tid}") from None

    def contains(self, itemset: Iterable[int]) -> bool:
        q = self.quantities
        return all(i in q for i in itemset)

    def utility(self, table: UtilityTable) -> int:
        return sum(qty * table[item] for item, qty in self.entries)


@dataclass(frozen=True)
class QuantitativeDatabase:
    transactions: Tuple[Transaction, ...]
    utilities: UtilityTable

    def __post_init__(self):
        transactions = tuple(self.transactions)
        last = 0
        for t in transactions:
            if t.tid <= last:
                raise ValueError(f"tids must be strictly increasing (tid {t.tid} after {last})")
            last = t.tid
            for item in t.quantities:
                if item not in self.utilities:
                    raise AbsentItemError(item)
        object.__setattr__(self, "transactions", transactions)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[Tuple[int, int]]],
                  utilities: UtilityTable) -> "QuantitativeDatabase":
        """Number rows as tids 1..n in the given order."""
        return cls(
            transactions=tuple(Transaction(tid, tuple(row)) for tid, row in enumerate(rows, start=1)),
            utilities=utilities,
        )

    def __len__(self) -> int:
        return len(self.transactions)

    def __iter__(self):
        return iter(self.transactions)

    @cached_property
    def transaction_utilities(self) -> Dict[int, int]:
        return {t.tid: t.utility(self.utilities) for t in self.transactions}

    @cached_property
    def total_utility(self) -> int:
        return sum(self.transaction_utilities.values())

    def items(self) -> List[int]:
        """Items occurring in at least one transaction, in canonical order."""
        return sorted({i for t in self.transactions for i in t.quantities})

    def head(self, n: int) -> "QuantitativeDatabase":
        return QuantitativeDatabase(self.transactions[:n], self.utilities)


class ResolvedThresholds(NamedTuple):
    """Absolute thresholds: money in the table's smallest unit, frequency as a count."""
    min_util: int
    min_fre: int


def _parse_threshold(text: Number, what: str) -> Tuple[Decimal, bool]:
    raw = str(text).strip()
    relative = raw.endswith("%")
    if relative:
        raw = raw[:-1].strip()
    try:
        value = Decimal(raw)
    except InvalidOperation:
        raise ThresholdError(f"{what} is not a number: {text!r}") from None
    if not value.is_finite() or value < 0:
        raise ThresholdError(f"{what} must be a non-negative number, got {text!r}")
    return (value / 100 if relative else value), relative


@dataclass(frozen=True)
class Thresholds:
    """User-facing thresholds; relative values are fractions (0.0015 == 0.15%)."""
    min_util: Decimal
    min_fre: Decimal
    util_relative: bool = False
    fre_relative: bool = False

    def __post_init__(self):
        for name in ("min_util", "min_fre"):
            value = getattr(self, name)
            try:
                value = Decimal(str(value))
            except InvalidOperation:
                raise ThresholdError(f"{name} is not a number: {value!r}") from None
            if not value.is_finite() or value < 0:
                raise ThresholdError(f"{name} must be non-negative, got {value}")
            object.__setattr__(self, name, value)

    @classmethod
    def parse(cls, min_util: Number, min_fre: Number) -> "Thresholds":
        """Accept absolute values (`15`, `2.5`) or percentages (`0.15%`)."""
        util, util_rel = _parse_threshold(min_util, "min_util")
        fre, fre_rel = _parse_threshold(min_fre, "min_fre")
        return cls(util, fre, util_rel, fre_rel)

    @classmethod
    def relative(cls, util_fraction: Number, fre_fraction: Number) -> "Thresholds":
        return cls(Decimal(str(util_fraction)), Decimal(str(fre_fraction)), True, True)

    def resolve(self, db: QuantitativeDatabase) -> ResolvedThresholds:
        if self.util_relative:
            min_util = _ceil(self.min_util * db.total_utility)
        else:
            min_util = _ceil(self.min_util * db.utilities.scale)
        if self.fre_relative:
            min_fre = _ceil(self.min_fre * len(db))
        else:
            min_fre = _ceil(self.min_fre)
        return ResolvedThresholds(min_util, min_fre)

    def describe(self) -> Tuple[str, str]:
        def fmt(value: Decimal, relative: bool) -> str:
            return f"{(value * 100).normalize():f}%" if relative else f"{value.normalize():f}"
        return fmt(self.min_util, self.util_relative), fmt(self.min_fre, self.fre_relative)


def resolve_thresholds(th: Union[Thresholds, ResolvedThresholds],
                       db: QuantitativeDatabase) -> ResolvedThresholds:
    if isinstance(th, ResolvedThresholds):
        return th
    return th.resolve(db)


class PatternClass(str, Enum):
    HFHUI = "HFHUI"
    HFLUI = "HFLUI"
    LFHUI = "LFHUI"
    LFLUI = "LFLUI"


REPORTED_CLASSES = (PatternClass.HFHUI, PatternClass.HFLUI, PatternClass.LFHUI)


@dataclass(frozen=True)
class ClassifiedPattern:
    itemset: Itemset
    utility: int
    support: int
    pattern_class: PatternClass


@dataclass
class RunStats:
    algorithm: str
    status: str = "ok"  # ok, timeout, refused
    wall_time_ms: float = 0.0
    peak_rss_bytes: Optional[int] = None
    peak_alloc_bytes: Optional[int] = None
    memory_best_effort: bool = True
    scan_count: int = 0
    candidate_count: int = 0
    fulist_count: int = 0
    level_sizes: List[int] = field(default_factory=list)
    max_depth: int = 0
    hfhui: int = 0
    hflui: int = 0
    lfhui: int = 0


@dataclass
class ClassificationReport:
    stats: RunStats
    hfhui: List[ClassifiedPattern] = field(default_factory=list)
    hflui: List[ClassifiedPattern] = field(default_factory=list)
    lfhui: List[ClassifiedPattern] = field(default_factory=list)
    # Itemsets whose measures were examined, canonical order; only filled when tracing.
    visited: Optional[Set[Itemset]] = None

    def _bucket(self, cls: PatternClass) -> List[ClassifiedPattern]:
        return {
            PatternClass.HFHUI: self.hfhui,
            PatternClass.HFLUI: self.hflui,
            PatternClass.LFHUI: self.lfhui,
        }[cls]

    def add(self, pattern: ClassifiedPattern):
        if pattern.pattern_class is PatternClass.LFLUI:
            return
        self._bucket(pattern.pattern_class).append(pattern)

    def patterns(self, cls: PatternClass) -> List[ClassifiedPattern]:
        return self._bucket(cls)

    def all_patterns(self) -> List[ClassifiedPattern]:
        return self.hfhui + self.hflui + self.lfhui

    def finalize(self) -> "ClassificationReport":
        """Sort each class canonically and copy the class sizes into the stats."""
        for bucket in (self.hfhui, self.hflui, self.lfhui):
            bucket.sort(key=lambda p: p.itemset)
        self.stats.hfhui = len(self.hfhui)
        self.stats.hflui = len(self.hflui)
        self.stats.lfhui = len(self.lfhui)
        return self

    @property
    def counts(self) -> Tuple[int, int, int]:
        return len(self.hfhui), len(self.hflui), len(self.lfhui)

    def as_sets(self) -> Dict[PatternClass, Set[Tuple[Itemset, int, int]]]:
        return {
            cls: {(p.itemset, p.utility, p.support) for p in self.patterns(cls)}
            for cls in REPORTED_CLASSES
        }


@dataclass(frozen=True)
class DatasetSummary:
    transactions: int
    items: int
    avg_length: float
    max_length: int
    total_utility: int
    total_quantity: int
    money_scale: int
