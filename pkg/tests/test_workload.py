"""
SPAARC edge cache simulator - Association and proximity aware prefetching for
edge caches.

Tests of our workload generators.

License:
::

    MIT License

    Copyright (c) 2025, 2026 SPAARC Simulator Contributors

    Permission is hereby granted, free of charge, to any person obtaining a copy
    of this software and associated documentation files (the "Software"), to deal
    in the Software without restriction, including without limitation the rights
    to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
    copies of the Software, and to permit persons to whom the Software is
    furnished to do so, subject to the following conditions:

    The above copyright notice and this permission notice shall be included in all
    copies or substantial portions of the Software.

    THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
    IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
    FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
    AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
    LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
    OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
    SOFTWARE.
"""

import math
from collections import defaultdict
from dataclasses import replace
from itertools import combinations

import numpy
import pytest

from edge_cache.spaarc.domain import Transaction, distance, sessionize
from edge_cache.spaarc.exceptions import CapacityError, ParameterError, TraceFormatError
from edge_cache.spaarc.workload import spmf as spmf_module
from edge_cache.spaarc.workload.config import Rect, WorkloadConfig
from edge_cache.spaarc.workload.environment import generate_environment
from edge_cache.spaarc.workload.generator import (
    generate_trace,
    partition_itemsets,
    session_starts,
)
from edge_cache.spaarc.workload.spmf import load_spmf, spmf_to_trace, write_spmf


def items_per_user(trace) -> dict:
    result = defaultdict(set)

    for event in trace:
        result[event.user_id].add(event.object_id)

    return result


def test_rect() -> None:
    rect = Rect.from_string("40:40:60:60")

    assert rect == Rect(40, 40, 60, 60)
    assert rect.area == 400
    assert rect.contains((40, 50))
    assert not rect.contains((39.9, 50))

    with pytest.raises(ParameterError):
        Rect.from_string("1:2:3")

    with pytest.raises(ParameterError):
        Rect.from_string("5:5:1:1")


@pytest.mark.parametrize(
    "params",
    [
        {"n_objects": 0},
        {"planted_support": 0},
        {"interaction_std": 20},
        {"min_spacing": 20, "max_spacing": 15},
        {"shift_at": 1.0},
        {"horizon": 0},
        {"max_access_gap": 1.0},
        {"history_sessions": -1},
    ],
)
def test_invalid_config(params) -> None:
    with pytest.raises(ParameterError):
        WorkloadConfig(**params)


def test_single_object() -> None:
    catalog = generate_environment(WorkloadConfig(n_objects=1))

    assert len(catalog) == 1
    assert WorkloadConfig().is_free(catalog[0].position)


def test_two_objects_are_spaced() -> None:
    catalog = generate_environment(WorkloadConfig(n_objects=2))

    assert distance(catalog[0].position, catalog[1].position) >= 10


def test_default_environment_geometry() -> None:
    config = WorkloadConfig()
    catalog = generate_environment(config)
    distances = catalog.nearest_neighbor_distances()

    assert len(catalog) == 50
    assert catalog.ids() == tuple(range(50))
    assert numpy.all(distances >= 10 - 1e-9)
    assert numpy.all(distances <= 15 + 1e-9)
    assert all(config.is_free(x.position) for x in catalog)
    assert all(10 <= x.size_mb <= 15 for x in catalog)

    for a, b in combinations(catalog, 2):
        assert distance(a.position, b.position) >= 10 - 1e-9


def test_environment_is_deterministic() -> None:
    config = WorkloadConfig(seed=3)

    assert generate_environment(config).digest() == generate_environment(config).digest()
    assert (
        generate_environment(config).digest()
        != generate_environment(WorkloadConfig(seed=4)).digest()
    )


def test_environment_capacity() -> None:
    with pytest.raises(CapacityError):
        generate_environment(WorkloadConfig(n_objects=10_000))


def test_partition_itemsets() -> None:
    rng = numpy.random.default_rng(1)

    for count in range(2, 25):
        itemsets = partition_itemsets(list(range(count)), rng)

        assert all(2 <= len(x) <= 4 for x in itemsets)
        assert sum(len(x) for x in itemsets) == count
        assert frozenset().union(*itemsets) == frozenset(range(count))


def test_forced_planting() -> None:
    config = WorkloadConfig(n_users=200, planted_support=1.0)
    workload = generate_trace(config, generate_environment(config))

    assert workload.planted_itemsets

    for items in items_per_user(workload.trace).values():
        for itemset in workload.planted_itemsets:
            assert itemset <= items


def test_empirical_support() -> None:
    config = WorkloadConfig(n_users=5000, planted_support=0.3)
    workload = generate_trace(config, generate_environment(config))
    sessions = list(items_per_user(workload.trace).values())

    assert len(sessions) == 5000

    for itemset in workload.planted_itemsets:
        support = sum(1 for x in sessions if itemset <= x) / len(sessions)

        assert abs(support - 0.3) <= 0.02


def test_default_workload_has_one_transaction_per_user() -> None:
    config = WorkloadConfig()
    workload = generate_trace(config, generate_environment(config))

    assert len(sessionize(workload.trace, gap=60)) == 100


def test_sessions_stay_single_transactions() -> None:
    config = WorkloadConfig(n_users=5000, planted_support=0.3)
    workload = generate_trace(config, generate_environment(config))
    transactions = sessionize(workload.trace, gap=60)

    assert len(transactions) == len(items_per_user(workload.trace)) == 5000

    for itemset in workload.planted_itemsets:
        support = sum(1 for x in transactions if itemset <= x.items) / len(transactions)

        assert abs(support - 0.3) <= 0.02


def test_far_objects_are_reached_in_time() -> None:
    # A walk across the whole region takes minutes at walking speed.
    config = WorkloadConfig(n_users=100, walk_speed=0.1)
    workload = generate_trace(config, generate_environment(config))

    assert len(sessionize(workload.trace, gap=60)) == len(items_per_user(workload.trace))


def test_poisson_session_count() -> None:
    config = WorkloadConfig(arrival_rate=0.05, horizon=20_000)
    starts = session_starts(config, numpy.random.default_rng(5))
    expected = 0.05 * 20_000

    assert abs(len(starts) - expected) <= 3 * math.sqrt(expected)
    assert numpy.all(numpy.diff(starts) > 0)
    assert starts[-1] <= 20_000


def test_trace_shape() -> None:
    config = WorkloadConfig(n_users=100)
    workload = generate_trace(config, generate_environment(config))
    trace = workload.trace
    last = {}

    assert [x.time for x in trace] == sorted(x.time for x in trace)

    for event in trace:
        assert event.object_id in workload.catalog
        assert event.user_position == workload.catalog[event.object_id].position

        if event.user_id in last:
            assert event.time - last[event.user_id] >= config.min_dwell
            assert event.time - last[event.user_id] <= config.max_access_gap + 1e-9

        last[event.user_id] = event.time


def test_trace_is_deterministic() -> None:
    config = WorkloadConfig(n_users=50, seed=9)
    catalog = generate_environment(config)

    assert generate_trace(config, catalog) == generate_trace(config, catalog)


def test_access_pattern_shift() -> None:
    config = WorkloadConfig(n_users=40, planted_support=1.0, shift_at=0.5)
    workload = generate_trace(config, generate_environment(config))
    first = frozenset().union(*workload.planted_itemsets)
    second = frozenset().union(*workload.shifted_itemsets)

    assert first and second
    assert not first & second

    for user_id, items in items_per_user(workload.trace).items():
        if user_id < 20:
            assert first <= items and not second & items
        else:
            assert second <= items and not first & items


def test_load_spmf(tmp_path) -> None:
    path = tmp_path / "groceries.txt"
    path.write_text("1 2 3\n5 5 7\n\n@CONVERTED_FROM_TEXT\n# comment\n9\n")

    transactions = load_spmf(str(path))

    assert [x.items for x in transactions] == [
        frozenset({1, 2, 3}),
        frozenset({5, 7}),
        frozenset({9}),
    ]
    assert [x.tx_id for x in transactions] == [0, 1, 2]
    assert len(load_spmf(str(path), limit=2)) == 2


def test_load_spmf_rejects_tokens(tmp_path) -> None:
    path = tmp_path / "broken.txt"
    path.write_text("1 2\n3 milk\n")

    with pytest.raises(TraceFormatError) as exception:
        load_spmf(str(path))

    assert exception.value.key == "line:2"


def test_load_spmf_missing_file(tmp_path) -> None:
    with pytest.raises(TraceFormatError):
        load_spmf(str(tmp_path / "nothing.txt"))


def test_load_spmf_downloads_urls(tmp_path, monkeypatch) -> None:
    local = tmp_path / "remote.txt"
    local.write_text("4 2\n")
    fetched = []

    def fake_fetch(url: str, destination_dir: str) -> str:
        fetched.append((url, destination_dir))
        return str(local)

    monkeypatch.setattr(spmf_module, "fetch_spmf", fake_fetch)

    transactions = load_spmf("https://example.org/remote.txt", download_dir="cache")

    assert fetched == [("https://example.org/remote.txt", "cache")]
    assert transactions[0].items == frozenset({2, 4})


def test_write_spmf(tmp_path) -> None:
    path = tmp_path / "out.txt"
    transactions = [Transaction(tx_id=0, items={3, 1}), Transaction(tx_id=1, items={2})]

    write_spmf(transactions, str(path))

    assert path.read_text() == "1 3\n2\n"
    assert load_spmf(str(path)) == transactions


def test_spmf_to_trace_single_transaction() -> None:
    workload = spmf_to_trace([Transaction(tx_id=0, items={11, 42})], WorkloadConfig())

    assert len(workload.trace) == 2
    assert {x.user_id for x in workload.trace} == {0}
    assert workload.catalog.ids() == (11, 42)


def test_spmf_to_trace_users() -> None:
    rng = numpy.random.default_rng(0)
    transactions = [
        Transaction(tx_id=x, items=[int(y) for y in rng.integers(0, 60, size=4)])
        for x in range(30)
    ]
    config = WorkloadConfig(seed=1)

    workload = spmf_to_trace(transactions, config)

    assert {x.user_id for x in workload.trace} == set(range(30))
    assert all(x.object_id in workload.catalog for x in workload.trace)
    assert len(workload.trace) == sum(len(x.items) for x in transactions)
    assert spmf_to_trace(transactions, config) == workload


def test_spmf_to_trace_capacity() -> None:
    transactions = [Transaction(tx_id=0, items=range(100))]

    with pytest.raises(CapacityError):
        spmf_to_trace(transactions, WorkloadConfig(max_placement_attempts=1))


def test_history_follows_the_initial_pattern() -> None:
    config = WorkloadConfig(
        n_users=40, planted_support=1.0, shift_at=0.5, history_sessions=30
    )
    workload = generate_trace(config, generate_environment(config))
    first = frozenset().union(*workload.planted_itemsets)
    sessions = items_per_user(workload.history)

    assert sorted(sessions) == list(range(40, 70))
    assert [x.time for x in workload.history] == sorted(x.time for x in workload.history)

    for items in sessions.values():
        assert first <= items
        assert not frozenset().union(*workload.shifted_itemsets) & items


def test_history_does_not_change_the_trace() -> None:
    config = WorkloadConfig(n_users=50, seed=9)
    catalog = generate_environment(config)

    without = generate_trace(replace(config, history_sessions=0), catalog)
    with_history = generate_trace(config, catalog)

    assert without.history == ()
    assert with_history.history
    assert with_history.trace == without.trace
