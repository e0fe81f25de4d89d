"""
SPAARC edge cache simulator - Association and proximity aware prefetching for
edge caches.

Tests of our minimum support tuner.

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

import pytest

from edge_cache.spaarc.arm import RuleSet, RuleSetHolder
from edge_cache.spaarc.domain import Transaction
from edge_cache.spaarc.exceptions import ParameterError
from edge_cache.spaarc.tuner import (
    MinSupportTuner,
    TunerConfig,
    generate_rulesets,
    get_degradation,
    get_min_sup_bound,
    kurtosis,
    search_bounds,
)


def transactions_of(*itemsets) -> list:
    return [Transaction(tx_id=i, items=x) for i, x in enumerate(itemsets)]


# Supports: 1 -> 0.75, 2 -> 0.75, 3 -> 0.25.
PAIRED = transactions_of([1, 2], [1, 2], [1, 2], [3])


def empty_rulesets(*supports: float) -> list:
    return [
        RuleSet(rules=(), min_support=x, min_confidence=0.1, generated_from=1)
        for x in supports
    ]


def test_get_degradation() -> None:
    assert get_degradation(0.5, 0.5) == 0
    assert get_degradation(0.5, 0.4) == pytest.approx(0.2)
    assert get_degradation(0.0, 0.1) == 0
    assert get_degradation(0.4, 0.6) == 0
    assert get_degradation(0.0, 0.0) == 0


def test_kurtosis() -> None:
    assert kurtosis([1, 1, 1, 9]) == pytest.approx(-2 / 3, abs=1e-9)
    assert kurtosis([]) == 0
    assert kurtosis([4.2]) == 0
    assert kurtosis([2, 2, 2]) == 0
    assert kurtosis([2.0, 2.0 + 4e-16, 2.0, 2.0 - 4e-16]) == 0
    assert kurtosis([1 / 3] * 5 + [0.1 / 0.3]) == 0


def test_get_min_sup_bound() -> None:
    assert get_min_sup_bound(transactions_of([1], [1], [1], [1], [2])) == pytest.approx(
        (0.5, 0.8)
    )
    assert get_min_sup_bound(transactions_of([1], [1, 2], [3])) == pytest.approx(
        (4 / 9, 2 / 3)
    )
    assert get_min_sup_bound(transactions_of([7])) == (1.0, 1.0)
    assert get_min_sup_bound(transactions_of([1, 2], [1, 2])) == (1.0, 1.0)


def test_get_min_sup_bound_needs_items() -> None:
    with pytest.raises(ParameterError):
        get_min_sup_bound([])


def test_search_bounds_without_guard() -> None:
    low, high = search_bounds(PAIRED, TunerConfig(grid_size=2, min_confidence=0.5))

    assert low == pytest.approx((0.75 + 0.75 + 0.25) / 3)
    assert high == pytest.approx(0.75)


def test_search_bounds_ratio_guard_falls_back() -> None:
    config = TunerConfig(grid_size=2, min_confidence=0.5, ratio_threshold=0.5)

    # 2 rules out of 3 itemsets at the first point.
    assert search_bounds(PAIRED, config) == pytest.approx((0.75, 0.75))


def test_search_bounds_kurtosis_guard() -> None:
    # Lifts are {2, 2} at the top of the grid and {2, 2, 3, 3} at the bottom.
    transactions = transactions_of(*([[1, 2]] * 6 + [[3, 4]] * 4 + [[5], [6]]))
    permissive = TunerConfig(grid_size=2, min_confidence=0.1, kurtosis_threshold=100)
    strict = TunerConfig(grid_size=2, min_confidence=0.1, kurtosis_threshold=1e-6)

    assert search_bounds(transactions, permissive) == pytest.approx((11 / 36, 0.5))
    assert search_bounds(transactions, strict) == pytest.approx((0.5, 0.5))


def test_generate_rulesets() -> None:
    config = TunerConfig(grid_size=2, min_confidence=0.5, rulesets=5)

    bounds, rulesets = generate_rulesets(PAIRED, config)
    supports = [x.min_support for x in rulesets]

    assert bounds == pytest.approx(((0.75 + 0.75 + 0.25) / 3, 0.75))
    assert len(rulesets) == 5
    assert supports == sorted(supports)
    assert len(set(supports)) == len(supports)
    assert supports[0] == pytest.approx(bounds[0])
    assert supports[-1] == pytest.approx(bounds[1])

    # Deterministic.
    assert generate_rulesets(PAIRED, config) == (bounds, rulesets)


def test_generate_rulesets_uses_recent_history() -> None:
    config = TunerConfig(grid_size=2, min_confidence=0.5, history=4)

    _, rulesets = generate_rulesets(transactions_of([8, 9], [8, 9]) + PAIRED, config)

    assert all(x.generated_from == 4 for x in rulesets)
    assert generate_rulesets([], config) is None


def test_install_selects_the_middle() -> None:
    holder = RuleSetHolder()
    tuner = MinSupportTuner(TunerConfig(), holder)

    tuner.install(empty_rulesets(0.5, 0.1, 0.3, 0.2, 0.4))

    assert [x.min_support for x in tuner.state.rulesets] == [0.1, 0.2, 0.3, 0.4, 0.5]
    assert tuner.set_a_rules(0.0) == 2
    assert holder.get().min_support == 0.3


def test_set_a_rules_steps() -> None:
    tuner = MinSupportTuner(TunerConfig(degradation_threshold=0.05))
    tuner.install(empty_rulesets(0.1, 0.2, 0.3, 0.4, 0.5))
    tuner.set_a_rules(0.0)

    assert tuner.set_a_rules(0.08) == 1
    assert tuner.set_a_rules(0.08) == 0
    assert tuner.set_a_rules(0.08) == 0
    assert tuner.set_a_rules(0.0) == 0
    assert tuner.set_a_rules(0.03) == 1
    assert tuner.holder.get().min_support == 0.2

    for _ in range(6):
        tuner.set_a_rules(0.05)

    assert tuner.state.active_index == 4


def test_tune_min_sup_branches() -> None:
    config = TunerConfig(
        degradation_threshold=0.05,
        grid_size=2,
        min_confidence=0.5,
        generation_latency=0,
    )
    tuner = MinSupportTuner(config)

    assert tuner.tune_min_sup(0.0, PAIRED) == "none"
    assert tuner.tune_min_sup(0.12, PAIRED) == "regenerate+install"
    assert tuner.state.active_index == 2
    assert tuner.tune_min_sup(0.07, PAIRED) == "step-down"
    assert tuner.tune_min_sup(0.0, PAIRED) == "keep"
    assert tuner.tune_min_sup(0.12, []) == "no-history+keep"


def test_background_generation_is_installed_later() -> None:
    config = TunerConfig(grid_size=2, min_confidence=0.5, generation_latency=1)
    previous = RuleSet(rules=(), min_support=0.9, min_confidence=0.5, generated_from=1)
    holder = RuleSetHolder(previous)

    with MinSupportTuner(config, holder) as tuner:
        first = tuner.on_viewpoint(0, 0.5, PAIRED)
        second = tuner.on_viewpoint(1, 0.3, PAIRED)

        assert first.action == "none"
        assert second.action == "regenerate+none"
        assert second.hrd == pytest.approx(0.4)
        assert tuner.state.generation_in_progress
        # Requests keep being served by the previous ruleset.
        assert holder.get() is previous

        # A second trigger while generating is coalesced.
        third = tuner.on_viewpoint(1, 0.1, PAIRED)

        assert third.action.startswith("coalesced")

        fourth = tuner.on_viewpoint(2, 0.1, PAIRED)

        assert fourth.action == "install"
        assert holder.get() is not previous
        assert fourth.active_min_support == holder.get().min_support

    assert [x.viewpoint for x in tuner.log] == [0, 1, 1, 2]


def test_collect_can_wait() -> None:
    config = TunerConfig(grid_size=2, min_confidence=0.5, generation_latency=3)
    tuner = MinSupportTuner(config)

    assert not tuner.collect()

    tuner.tune_min_sup(0.5, PAIRED)

    assert not tuner.collect()
    assert tuner.collect(wait=True)
    assert len(tuner.state.rulesets) == config.rulesets

    tuner.close()


@pytest.mark.parametrize(
    "params",
    [
        {"degradation_threshold": 0},
        {"degradation_threshold": 1},
        {"min_confidence": 0},
        {"grid_size": 1},
        {"rulesets": 0},
        {"generation_latency": -1},
        {"ratio_threshold": 0},
        {"hit_rate_scope": "daily"},
        {"algorithm": "eclat"},
    ],
)
def test_invalid_config(params) -> None:
    with pytest.raises(ParameterError):
        TunerConfig(**params)
