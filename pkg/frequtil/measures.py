"""Exact measures on a quantitative database: utility, support, TU, TWU, and the class rule.

Utility follows min-quantity semantics: in every transaction containing X,
X occurs min(q(x, T)) times, each occurrence worth v(X) = sum of the
external utilities of X's items. Hence U(X) = S(X) * v(X).
"""

from typing import Iterable

from .models import (
    DatasetSummary,
    Itemset,
    PatternClass,
    QuantitativeDatabase,
    ResolvedThresholds,
    Transaction,
)


def occurrence(itemset: Iterable[int], t: Transaction) -> int:
    """min(q(x, T)) over x in the itemset, or 0 when T does not contain all of it."""
    q = t.quantities
    count = None
    for item in itemset:
        qty = q.get(item)
        if qty is None:
            return 0
        if count is None or qty < count:
            count = qty
    return count or 0


def item_utility(item: int, t: Transaction, db: QuantitativeDatabase) -> int:
    return t.quantity(item) * db.utilities[item]


def transaction_utility(t: Transaction, db: QuantitativeDatabase) -> int:
    return sum(item_utility(item, t, db) for item, _ in t.entries)


def itemset_support(x: Itemset, db: QuantitativeDatabase) -> int:
    return sum(occurrence(x, t) for t in db)


def itemset_utility(x: Itemset, db: QuantitativeDatabase) -> int:
    ext = db.utilities.itemset_utility(x)
    return sum(occurrence(x, t) * ext for t in db)


def twu(x: Itemset, db: QuantitativeDatabase) -> int:
    return sum(transaction_utility(t, db) for t in db if t.contains(x))


def classify(utility: int, support: int, th: ResolvedThresholds) -> PatternClass:
    high_util = utility >= th.min_util
    high_fre = support >= th.min_fre
    if high_fre:
        return PatternClass.HFHUI if high_util else PatternClass.HFLUI
    return PatternClass.LFHUI if high_util else PatternClass.LFLUI


def describe(db: QuantitativeDatabase) -> DatasetSummary:
    lengths = [len(t) for t in db]
    return DatasetSummary(
        transactions=len(db),
        items=len(db.items()),
        avg_length=(sum(lengths) / len(lengths)) if lengths else 0.0,
        max_length=max(lengths, default=0),
        total_utility=db.total_utility,
        total_quantity=sum(q for t in db for _, q in t.entries),
        money_scale=db.utilities.scale,
    )
