"""Brute-force reference classifier: every non-empty subset of the occurring items."""

from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence

from ..config import AppConfig
from ..errors import OracleRefusal
from ..measures import classify, itemset_support, itemset_utility
from ..models import (
    ClassificationReport,
    ClassifiedPattern,
    Itemset,
    QuantitativeDatabase,
    ResolvedThresholds,
    RunStats,
)
from ..profiler import Deadline
from .base import BaseClassifier

DEADLINE_EVERY = 256  # subsets between deadline polls


@dataclass(frozen=True)
class OracleLimit:
    max_items: int = 20


def _subsets(items: Sequence[int]) -> Iterator[Itemset]:
    """Non-empty subsets in lexicographic order of their sorted tuples."""
    for i, item in enumerate(items):
        yield (item,)
        for rest in _subsets(items[i + 1:]):
            yield (item,) + rest


def classify_all(db: QuantitativeDatabase, th: ResolvedThresholds,
                 limit: OracleLimit = OracleLimit(),
                 deadline: Optional[Deadline] = None) -> ClassificationReport:
    items: List[int] = db.items()
    if len(items) > limit.max_items:
        raise OracleRefusal(len(items), limit.max_items)

    report = ClassificationReport(RunStats("oracle"))
    evaluated = 0
    for itemset in _subsets(items):
        if deadline is not None and evaluated % DEADLINE_EVERY == 0:
            deadline.check()
        evaluated += 1
        support = itemset_support(itemset, db)
        if support == 0:
            continue
        utility = itemset_utility(itemset, db)
        report.add(ClassifiedPattern(itemset, utility, support, classify(utility, support, th)))

    report.stats.candidate_count = evaluated
    report.stats.scan_count = 2 * evaluated
    return report.finalize()


class OracleClassifier(BaseClassifier):
    name = "oracle"

    def __init__(self, limit: OracleLimit = OracleLimit(), **kwargs):
        super().__init__(**kwargs)
        self.limit = limit

    @classmethod
    def from_config(cls, config: AppConfig, **kwargs) -> "OracleClassifier":
        kwargs.setdefault("limit", OracleLimit(config.oracle.max_items))
        return super().from_config(config, **kwargs)

    def feasible(self, db: QuantitativeDatabase) -> bool:
        return len(db.items()) <= self.limit.max_items

    def classify(self, db: QuantitativeDatabase, th: ResolvedThresholds) -> ClassificationReport:
        return classify_all(db, th, self.limit, self.deadline)
