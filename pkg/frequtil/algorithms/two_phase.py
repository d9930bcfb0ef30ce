"""Level-wise two-phase classifier.

Phase I measures TWU and support level by level, keeps itemsets that pass
either threshold (anything else is LFLUI together with all its supersets),
and joins the survivors sharing a (k-1)-prefix into the next level.
Phase II rescans the database once for exact utilities and classifies.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations, groupby
from math import comb
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from ..errors import ContractViolation
from ..measures import classify
from ..models import (
    ClassificationReport,
    ClassifiedPattern,
    Itemset,
    PatternClass,
    QuantitativeDatabase,
    ResolvedThresholds,
    RunStats,
    Transaction,
)
from ..profiler import Deadline
from .base import BaseClassifier

logger = logging.getLogger("frequtil")

DEADLINE_EVERY = 1024  # transactions between deadline polls
SUBSET_LIMIT = 4096  # k-subsets per transaction before falling back to candidate walks


@dataclass(frozen=True)
class LevelCandidate:
    itemset: Itemset
    twu: int
    fre: int


@dataclass
class CandidatePool:
    candidates: Dict[Itemset, LevelCandidate] = field(default_factory=dict)
    level_sizes: List[int] = field(default_factory=list)  # itemsets measured per level
    scans: int = 0

    def __len__(self) -> int:
        return len(self.candidates)

    def __contains__(self, itemset: Itemset) -> bool:
        return itemset in self.candidates

    def add(self, candidate: LevelCandidate):
        self.candidates[candidate.itemset] = candidate


def connect(i1: Itemset, i2: Itemset) -> Optional[Itemset]:
    """Join two k-itemsets sharing their first k-1 items into a (k+1)-itemset."""
    if len(i1) != len(i2) or not i1:
        raise ContractViolation(f"cannot connect itemsets of length {len(i1)} and {len(i2)}")
    if i1[:-1] != i2[:-1] or i1[-1] == i2[-1]:
        return None
    a, b = i1[-1], i2[-1]
    return i1[:-1] + ((a, b) if a < b else (b, a))


class _LengthIndex:
    """Candidates of one length, matched against a transaction.

    Short transactions enumerate their k-subsets and look each one up;
    transactions with more k-subsets than SUBSET_LIMIT walk the candidates
    starting with each of their items instead.
    """

    def __init__(self, k: int, itemsets: List[Itemset]):
        self.k = k
        self.members = set(itemsets)
        self.items = {i for x in itemsets for i in x}
        self.by_first: Dict[int, List[Itemset]] = {}
        for itemset in itemsets:
            self.by_first.setdefault(itemset[0], []).append(itemset)

    def matches(self, t: Transaction) -> Iterator[Tuple[Itemset, int]]:
        kept = [(i, q) for i, q in t.entries if i in self.items]  # ascending item order
        k = self.k
        if len(kept) < k:
            return
        if comb(len(kept), k) <= SUBSET_LIMIT:
            members = self.members
            for combo in combinations(kept, k):
                itemset = tuple(i for i, _ in combo)
                if itemset in members:
                    yield itemset, min(q for _, q in combo)
            return

        quantities = t.quantities
        for item, qty in kept:
            for itemset in self.by_first.get(item, ()):
                occ = qty
                for other in itemset[1:]:
                    other_qty = quantities.get(other)
                    if other_qty is None:
                        occ = 0
                        break
                    if other_qty < occ:
                        occ = other_qty
                if occ:
                    yield itemset, occ


def _occurrences(db: QuantitativeDatabase, itemsets: Iterable[Itemset],
                 deadline: Optional[Deadline] = None) -> Iterator[Tuple[Transaction, Itemset, int]]:
    """One pass over db yielding (transaction, itemset, min quantity) for each containment."""
    by_length: Dict[int, List[Itemset]] = {}
    for itemset in itemsets:
        by_length.setdefault(len(itemset), []).append(itemset)
    indexes = [_LengthIndex(k, members) for k, members in sorted(by_length.items())]

    for n, t in enumerate(db):
        if deadline is not None and n % DEADLINE_EVERY == 0:
            deadline.check()
        for index in indexes:
            for itemset, occ in index.matches(t):
                yield t, itemset, occ


def measure_level(db: QuantitativeDatabase, level: Sequence[Itemset],
                  deadline: Optional[Deadline] = None) -> List[LevelCandidate]:
    """Exact TWU and support of every itemset of one level, in a single scan."""
    if len({len(x) for x in level}) > 1:
        raise ContractViolation("all itemsets of a level must have the same length")

    twu = dict.fromkeys(level, 0)
    fre = dict.fromkeys(level, 0)
    tu = db.transaction_utilities
    for t, itemset, occ in _occurrences(db, twu, deadline):
        twu[itemset] += tu[t.tid]
        fre[itemset] += occ

    return [LevelCandidate(x, twu[x], fre[x]) for x in sorted(twu)]


def _next_level(survivors: List[Itemset]) -> List[Itemset]:
    # survivors are sorted, so itemsets sharing a prefix are contiguous
    level: List[Itemset] = []
    for _, group in groupby(survivors, key=lambda x: x[:-1]):
        group = list(group)
        for i, first in enumerate(group):
            for second in group[i + 1:]:
                joined = connect(first, second)
                if joined is not None:
                    level.append(joined)
    return level


def phase1(db: QuantitativeDatabase, th: ResolvedThresholds,
           deadline: Optional[Deadline] = None) -> CandidatePool:
    pool = CandidatePool()
    level = [(item,) for item in db.items()]
    k = 1

    while level:
        measured = measure_level(db, level, deadline)
        pool.scans += 1
        pool.level_sizes.append(len(level))

        survivors = []
        for c in measured:
            if c.fre > 0 and (c.twu >= th.min_util or c.fre >= th.min_fre):
                pool.add(c)
                survivors.append(c.itemset)

        logger.debug(f"[gen] Level {k}: {len(level):,} measured, {len(survivors):,} kept")
        level = _next_level(survivors)
        k += 1

    return pool


def phase2(db: QuantitativeDatabase, pool: CandidatePool, th: ResolvedThresholds,
           deadline: Optional[Deadline] = None) -> ClassificationReport:
    report = ClassificationReport(RunStats("gen"))
    if not pool.candidates:
        return report.finalize()

    support = dict.fromkeys(pool.candidates, 0)
    for _, itemset, occ in _occurrences(db, support, deadline):
        support[itemset] += occ

    table = db.utilities
    for itemset in sorted(support):
        s = support[itemset]
        utility = s * table.itemset_utility(itemset)
        cls = classify(utility, s, th)
        if cls is PatternClass.LFLUI:
            # admitted on a TWU overestimate, exact utility says otherwise
            continue
        report.add(ClassifiedPattern(itemset, utility, s, cls))

    return report.finalize()


class TwoPhaseClassifier(BaseClassifier):
    name = "gen"

    def classify(self, db: QuantitativeDatabase, th: ResolvedThresholds) -> ClassificationReport:
        pool = phase1(db, th, self.deadline)
        self.deadline.check()
        report = phase2(db, pool, th, self.deadline)

        stats = report.stats
        stats.scan_count = pool.scans + 1
        stats.candidate_count = len(pool)
        stats.level_sizes = list(pool.level_sizes)
        return report


def run_gen(db: QuantitativeDatabase, th, **kwargs) -> ClassificationReport:
    return TwoPhaseClassifier(**kwargs).run(db, th)
