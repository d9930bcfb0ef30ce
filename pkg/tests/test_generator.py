from collections import Counter

import pytest

from frequtil.generator import GeneratorConfig, generate


def small_config(**kwargs):
    options = dict(transaction_count=500, item_universe_size=40, average_transaction_length=5,
                   max_quantity=4, external_utility_range=(2, 7), seed=7)
    options.update(kwargs)
    return GeneratorConfig(**options)


def test_same_seed_same_database():
    assert generate(small_config()) == generate(small_config())


def test_different_seed_different_database():
    assert generate(small_config(seed=1)).transactions != generate(small_config(seed=2)).transactions


def test_generated_values_stay_in_range():
    cfg = small_config()
    db = generate(cfg)
    assert len(db) == 500
    assert set(db.utilities.items()) == set(range(1, 41))
    assert all(2 <= db.utilities[i] <= 7 for i in db.utilities.items())
    for t in db:
        assert 1 <= len(t) <= 40
        assert all(1 <= q <= 4 for _, q in t.entries)


def test_average_length_near_target():
    db = generate(small_config(transaction_count=2000))
    avg = sum(len(t) for t in db) / len(db)
    assert 4.5 < avg < 5.5


def test_popularity_is_skewed():
    db = generate(small_config(transaction_count=2000))
    counts = Counter(i for t in db for i in t.items)
    ranked = sorted(counts.values(), reverse=True)
    assert ranked[0] > 3 * ranked[len(ranked) // 2]


@pytest.mark.parametrize("kwargs", [
    dict(transaction_count=0),
    dict(item_universe_size=0),
    dict(average_transaction_length=0),
    dict(average_transaction_length=50),
    dict(max_quantity=0),
    dict(external_utility_range=(0, 3)),
    dict(external_utility_range=(5, 3)),
    dict(zipf_exponent=0),
])
def test_invalid_config(kwargs):
    with pytest.raises(ValueError):
        small_config(**kwargs)
