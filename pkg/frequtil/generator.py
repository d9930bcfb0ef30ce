"""Synthetic quantitative transaction databases with Zipf item popularity."""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .models import QuantitativeDatabase, UtilityTable

logger = logging.getLogger("frequtil")


@dataclass(frozen=True)
class GeneratorConfig:
    transaction_count: int = 100_000
    item_universe_size: int = 1_000
    average_transaction_length: float = 10.0
    max_quantity: int = 5
    external_utility_range: Tuple[int, int] = (1, 10)
    seed: int = 42
    zipf_exponent: float = 1.2

    def __post_init__(self):
        if self.transaction_count < 1:
            raise ValueError("transaction_count must be positive")
        if self.item_universe_size < 1:
            raise ValueError("item_universe_size must be positive")
        if self.average_transaction_length <= 0:
            raise ValueError("average_transaction_length must be positive")
        if self.average_transaction_length > self.item_universe_size:
            raise ValueError(
                f"average_transaction_length {self.average_transaction_length} exceeds "
                f"item_universe_size {self.item_universe_size}"
            )
        if self.max_quantity < 1:
            raise ValueError("max_quantity must be positive")
        lo, hi = self.external_utility_range
        if lo < 1 or hi < lo:
            raise ValueError(f"external_utility_range must satisfy 1 <= lo <= hi, got {lo}..{hi}")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.zipf_exponent <= 0:
            raise ValueError("zipf_exponent must be positive")


def generate(cfg: GeneratorConfig) -> QuantitativeDatabase:
    """Deterministic for a fixed config: same seed, same database."""
    rng = np.random.default_rng(cfg.seed)
    n_items = cfg.item_universe_size
    items = np.arange(1, n_items + 1)

    # Popularity rank is a random permutation so item ids carry no frequency signal.
    ranks = rng.permutation(n_items) + 1
    weights = 1.0 / np.power(ranks.astype(float), cfg.zipf_exponent)
    weights /= weights.sum()

    lo, hi = cfg.external_utility_range
    utilities = rng.integers(lo, hi, endpoint=True, size=n_items)
    table = UtilityTable({int(i): int(v) for i, v in zip(items, utilities)})

    lengths = np.clip(rng.poisson(cfg.average_transaction_length, size=cfg.transaction_count), 1, n_items)

    rows = []
    for length in lengths:
        chosen = rng.choice(items, size=int(length), replace=False, p=weights)
        quantities = rng.integers(1, cfg.max_quantity, endpoint=True, size=int(length))
        rows.append([(int(i), int(q)) for i, q in zip(chosen, quantities)])

    db = QuantitativeDatabase.from_rows(rows, table)
    logger.info(
        f"Generated {len(db):,} transactions over {n_items:,} items "
        f"(avg len {float(lengths.mean()):.2f}, seed {cfg.seed})"
    )
    return db
