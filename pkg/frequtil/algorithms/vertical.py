"""Vertical classifier over frequency-utility lists.

Two scans build a revised database: items failing both thresholds are
dropped, the rest are ordered by ascending TWU, and each item gets an
FU-list of (tid, quantity, remaining utility) entries. Search then only
intersects lists; the database is never read again.
"""

import logging
from array import array
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

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
)
from ..profiler import Deadline
from .base import BaseClassifier

logger = logging.getLogger("frequtil")


class FUEntry(NamedTuple):
    tid: int
    fre: int  # occurrences of the itemset in this transaction
    rutil: int  # utility of the items after the itemset's last item


@dataclass
class FUList:
    """Column-wise FU-list: entry i is (tids[i], fre[i], rutil[i]), tids ascending."""
    itemset: Itemset  # in TWU order, not canonical order
    tids: np.ndarray
    fre: np.ndarray
    rutil: np.ndarray
    ext_util: int  # v(X)
    item_util: int  # v(last item)
    # (support, remaining utility) sums; filled by measures_of or SiblingBlock
    totals: Optional[Tuple[int, int]] = field(default=None, repr=False, compare=False)

    @classmethod
    def from_entries(cls, itemset: Sequence[int], entries: Iterable[Tuple[int, int, int]],
                     ext_util: int, item_util: int) -> "FUList":
        cols = np.array(list(entries), dtype=np.int64).reshape(-1, 3)
        return cls(tuple(itemset), cols[:, 0].copy(), cols[:, 1].copy(), cols[:, 2].copy(),
                   ext_util, item_util)

    @property
    def entries(self) -> List[FUEntry]:
        return [FUEntry(int(t), int(f), int(r)) for t, f, r in zip(self.tids, self.fre, self.rutil)]

    def __len__(self) -> int:
        return len(self.tids)


@dataclass(frozen=True)
class RevisedTransaction:
    tid: int
    entries: Tuple[Tuple[int, int], ...]  # (item, quantity) in TWU order
    utility: int


@dataclass
class RevisedDatabase:
    # filled only by build_revised(..., keep_transactions=True)
    transactions: List[RevisedTransaction] = field(default_factory=list)
    transaction_count: int = 0  # non-empty revised transactions
    order: List[int] = field(default_factory=list)  # surviving items, ascending TWU then id
    twu: Dict[int, int] = field(default_factory=dict)  # per item, on the original database
    support: Dict[int, int] = field(default_factory=dict)
    scans: int = 0

    @property
    def rank(self) -> Dict[int, int]:
        return {item: r for r, item in enumerate(self.order)}

    def __len__(self) -> int:
        return self.transaction_count


def build_revised(db: QuantitativeDatabase, th: ResolvedThresholds,
                  deadline: Optional[Deadline] = None,
                  keep_transactions: bool = False) -> Tuple[RevisedDatabase, List[FUList]]:
    """Two scans: per-item TWU and support, then 1-item FU-lists over the revised transactions."""
    revised = RevisedDatabase()
    tu = db.transaction_utilities
    table = db.utilities

    for t in db:
        for item, qty in t.entries:
            revised.twu[item] = revised.twu.get(item, 0) + tu[t.tid]
            revised.support[item] = revised.support.get(item, 0) + qty
    revised.scans += 1
    if deadline is not None:
        deadline.check()

    keep = [
        item for item, s in revised.support.items()
        if s > 0 and (revised.twu[item] >= th.min_util or s >= th.min_fre)
    ]
    revised.order = sorted(keep, key=lambda i: (revised.twu[i], i))
    rank = revised.rank

    # (tids, fre, rutil) per item, packed as int64
    columns = {item: (array("q"), array("q"), array("q")) for item in revised.order}
    for t in db:
        kept = sorted(((i, q) for i, q in t.entries if i in rank), key=lambda e: rank[e[0]])
        if not kept:
            continue
        utils = [q * table[i] for i, q in kept]
        remaining = total = sum(utils)
        for (item, qty), u in zip(kept, utils):
            remaining -= u
            tids, fre, rutil = columns[item]
            tids.append(t.tid)
            fre.append(qty)
            rutil.append(remaining)
        revised.transaction_count += 1
        if keep_transactions:
            revised.transactions.append(RevisedTransaction(t.tid, tuple(kept), total))
    revised.scans += 1

    fus = []
    for item in revised.order:
        tids, fre, rutil = columns.pop(item)
        fus.append(FUList(
            (item,),
            np.frombuffer(tids, dtype=np.int64),
            np.frombuffer(fre, dtype=np.int64),
            np.frombuffer(rutil, dtype=np.int64),
            table[item],
            table[item],
        ))

    logger.debug(
        f"[fast] Revised database: {len(revised):,} transactions, "
        f"{len(revised.order):,} of {len(revised.twu):,} items kept"
    )
    return revised, fus


def extend(prefix: Sequence[int], ex: FUList, ey: FUList,
           rank: Optional[Dict[int, int]] = None) -> FUList:
    """FU-list of prefix + x + y from those of prefix + x and prefix + y.

    y must come after x in the revised order; pass rank to have that checked.
    """
    prefix = tuple(prefix)
    depth = len(prefix) + 1
    if len(ex.itemset) != depth or len(ey.itemset) != depth:
        raise ContractViolation("both FU-lists must extend the prefix by exactly one item")
    if ex.itemset[:-1] != prefix or ey.itemset[:-1] != prefix:
        raise ContractViolation(f"FU-lists {ex.itemset} and {ey.itemset} do not share prefix {prefix}")
    x, y = ex.itemset[-1], ey.itemset[-1]
    if x == y or (rank is not None and rank[y] <= rank[x]):
        raise ContractViolation(f"item {y} must come after item {x} in the revised order")

    tids, ia, ib = np.intersect1d(ex.tids, ey.tids, assume_unique=True, return_indices=True)
    return FUList(
        ex.itemset + (y,),
        tids,
        np.minimum(ex.fre[ia], ey.fre[ib]),
        ey.rutil[ib],
        ex.ext_util + ey.item_util,
        ey.item_util,
    )


def measures_of(fu: FUList) -> Tuple[int, int, int]:
    """(utility, support, remaining utility) of the list's itemset."""
    if fu.totals is None:
        fu.totals = (int(fu.fre.sum()), int(fu.rutil.sum()))
    support, rutil = fu.totals
    return support * fu.ext_util, support, rutil


class SiblingBlock:
    """The FU-lists of one search level laid end to end.

    extend(i) builds every non-empty child of fus[i] with the later siblings
    in one pass: fus[i]'s tids are marked in a dense tid -> position array and
    the concatenated later entries are looked up against it.
    """

    def __init__(self, fus: List[FUList], rank: Optional[Dict[int, int]] = None):
        if rank is not None:
            ranks = [rank[f.itemset[-1]] for f in fus]
            if any(a >= b for a, b in zip(ranks, ranks[1:])):
                raise ContractViolation("sibling FU-lists are not in revised order")
        self.fus = fus
        lengths = np.array([len(f) for f in fus], dtype=np.int64)
        self.offsets = np.concatenate(([0], np.cumsum(lengths)))
        self.tids = np.concatenate([f.tids for f in fus])
        self.fre = np.concatenate([f.fre for f in fus])
        self.rutil = np.concatenate([f.rutil for f in fus])

    def extend(self, i: int, positions: np.ndarray) -> List[FUList]:
        """Non-empty FU-lists of fus[i] + y for every later sibling y, in sibling order.

        positions must be -1 everywhere and is left that way.
        """
        fx = self.fus[i]
        start = int(self.offsets[i + 1])
        positions[fx.tids] = np.arange(len(fx), dtype=np.int64)
        try:
            found = positions[self.tids[start:]]
        finally:
            positions[fx.tids] = -1

        hit = np.flatnonzero(found >= 0)
        if not len(hit):
            return []
        at = hit + start
        owner = np.searchsorted(self.offsets, at, side="right") - 1
        tids = self.tids[at]
        fre = np.minimum(fx.fre[found[hit]], self.fre[at])
        rutil = self.rutil[at]

        # owner is non-decreasing, one run per child
        starts = np.flatnonzero(np.concatenate(([True], owner[1:] != owner[:-1])))
        ends = np.append(starts[1:], len(owner)).tolist()
        supports = np.add.reduceat(fre, starts).tolist()
        rutils = np.add.reduceat(rutil, starts).tolist()

        children = []
        for s, e, j, support, remaining in zip(starts.tolist(), ends, owner[starts].tolist(),
                                               supports, rutils):
            fy = self.fus[j]
            children.append(FUList(
                fx.itemset + (fy.itemset[-1],),
                tids[s:e],
                fre[s:e],
                rutil[s:e],
                fx.ext_util + fy.item_util,
                fy.item_util,
                (support, remaining),
            ))
        return children


def _worth_extending(utility: int, support: int, rutil: int, th: ResolvedThresholds) -> bool:
    # U + rutil bounds the utility of every extension; support never grows
    return utility + rutil >= th.min_util or support >= th.min_fre


def should_extend(fu: FUList, th: ResolvedThresholds) -> bool:
    """False only when no extension can be HFHUI, HFLUI or LFHUI."""
    if not len(fu):
        return False
    return _worth_extending(*measures_of(fu), th)


def search(prefix: Itemset, fus: List[FUList], th: ResolvedThresholds,
           report: ClassificationReport, deadline: Optional[Deadline] = None,
           rank: Optional[Dict[int, int]] = None, positions: Optional[np.ndarray] = None):
    """Classify every list in fus, then recurse into the ones worth extending.

    positions is the shared tid -> position scratch array of SiblingBlock.extend.
    """
    stats = report.stats
    depth = len(prefix) + 1
    if fus and depth > stats.max_depth:
        stats.max_depth = depth
    if positions is None:
        last_tid = max((int(f.tids[-1]) for f in fus if len(f)), default=0)
        positions = np.full(last_tid + 1, -1, dtype=np.int64)

    block = None
    for i, fx in enumerate(fus):
        if deadline is not None:
            deadline.check()
        utility, support, rutil = measures_of(fx)
        if support == 0:
            continue

        cls = classify(utility, support, th)
        if report.visited is not None:
            report.visited.add(tuple(sorted(fx.itemset)))
        if cls is not PatternClass.LFLUI:
            report.add(ClassifiedPattern(tuple(sorted(fx.itemset)), utility, support, cls))

        if not _worth_extending(utility, support, rutil, th) or i + 1 == len(fus):
            continue

        if block is None:
            block = SiblingBlock(fus, rank)
        children = block.extend(i, positions)
        stats.fulist_count += len(children)
        if children:
            search(fx.itemset, children, th, report, deadline, rank, positions)


class VerticalClassifier(BaseClassifier):
    name = "fast"

    def __init__(self, trace_visits: bool = False, check_order: bool = False, **kwargs):
        super().__init__(**kwargs)
        self.trace_visits = trace_visits
        self.check_order = check_order

    def classify(self, db: QuantitativeDatabase, th: ResolvedThresholds) -> ClassificationReport:
        revised, fus = build_revised(db, th, self.deadline)
        report = ClassificationReport(
            RunStats(self.name),
            visited=set() if self.trace_visits else None,
        )
        stats = report.stats
        stats.scan_count = revised.scans
        stats.fulist_count = len(fus)
        stats.candidate_count = len(revised.order)

        search((), fus, th, report, self.deadline, revised.rank if self.check_order else None)
        return report


def run_fast(db: QuantitativeDatabase, th, **kwargs) -> ClassificationReport:
    return VerticalClassifier(**kwargs).run(db, th)
