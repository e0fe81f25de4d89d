"""
SPAARC edge cache simulator - Association and proximity aware prefetching for
edge caches.

Provides the adaptive minimum support tuner.

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

import logging
import math
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy
from scipy import stats

from edge_cache.spaarc.arm import (
    RuleSet,
    RuleSetHolder,
    build_ruleset,
    filter_lift,
    gen_frequent_itemsets,
    gen_rules,
)
from edge_cache.spaarc.defaults.simulation import (
    ARM_ALGORITHMS,
    DEFAULT_MAX_ITEMSET_SIZE,
    DEGRADATION_EPSILON,
    HIT_RATE_SCOPES,
    KURTOSIS_SPREAD_TOLERANCE,
)
from edge_cache.spaarc.domain import Transaction
from edge_cache.spaarc.exceptions import ParameterError


@dataclass(frozen=True)
class TunerConfig:
    """
    Describes the knobs of the tuner.
    """

    degradation_threshold: float = 0.05
    min_confidence: float = 0.1
    grid_size: int = 8
    ratio_threshold: float = 20.0
    kurtosis_threshold: float = 2.0
    rulesets: int = 5
    history: int = 100
    viewpoint_size: int = 10
    generation_latency: int = 1
    hit_rate_scope: str = "viewpoint"
    max_itemset_size: int = DEFAULT_MAX_ITEMSET_SIZE
    algorithm: str = "apriori"

    def __post_init__(self) -> None:
        if not 0 < self.degradation_threshold < 1:
            raise ParameterError(
                "degradation_threshold must be in (0, 1).",
                key="degradation_threshold",
            )

        if not 0 < self.min_confidence <= 1:
            raise ParameterError(
                "min_confidence must be in (0, 1].", key="min_confidence"
            )

        for key, minimum in (
            ("grid_size", 2),
            ("rulesets", 1),
            ("history", 1),
            ("viewpoint_size", 1),
            ("generation_latency", 0),
            ("max_itemset_size", 1),
        ):
            value = getattr(self, key)

            if not (isinstance(value, int) and value >= minimum):
                raise ParameterError(
                    f"{key} must be an integer >= {minimum}, got {value!r}.",
                    key=key,
                )

        for key in ("ratio_threshold", "kurtosis_threshold"):
            if not getattr(self, key) > 0:
                raise ParameterError(f"{key} must be positive.", key=key)

        if self.hit_rate_scope not in HIT_RATE_SCOPES:
            raise ParameterError(
                f"Unknown hit rate scope {self.hit_rate_scope!r}.",
                key="hit_rate_scope",
            )

        if self.algorithm not in ARM_ALGORITHMS:
            raise ParameterError(
                f"Unknown algorithm {self.algorithm!r}.", key="algorithm"
            )


@dataclass
class TunerState:
    """
    Describes what the tuner currently works with.
    """

    rulesets: List[RuleSet] = field(default_factory=list)
    active_index: int = -1
    last_hit_rate: Optional[float] = None
    hrd: float = 0.0
    generation_in_progress: bool = False
    fresh: bool = False
    bounds: Optional[Tuple[float, float]] = None

    @property
    def active_ruleset(self) -> Optional[RuleSet]:
        """
        Provides the selected ruleset.
        """

        if 0 <= self.active_index < len(self.rulesets):
            return self.rulesets[self.active_index]

        return None


@dataclass(frozen=True)
class TunerEvent:
    """
    Describes what the tuner did at a viewpoint.
    """

    viewpoint: int
    hit_rate: float
    hrd: float
    action: str
    active_min_support: Optional[float]


def get_degradation(prev_hr: float, curr_hr: float) -> float:
    """
    Provides the relative hit rate drop between two viewpoints. Improvements
    give 0.
    """

    return max(0.0, (prev_hr - curr_hr) / max(prev_hr, DEGRADATION_EPSILON))


def kurtosis(values: Sequence[float]) -> float:
    """
    Provides the excess kurtosis (biased central moments) of the given values.
    Fewer than two values, or values without any spread, give 0.
    """

    values = numpy.asarray(values, dtype=float)

    if values.size < 2:
        return 0.0

    # Lifts which only differ by rounding have no spread either.
    if numpy.ptp(values) <= KURTOSIS_SPREAD_TOLERANCE * numpy.abs(values).max():
        return 0.0

    return float(stats.kurtosis(values, fisher=True, bias=True))


def get_min_sup_bound(transactions: Sequence[Transaction]) -> Tuple[float, float]:
    """
    Provides the support range worth exploring: from the mean to the maximum
    single item support.

    :raise ParameterError:
        When the transactions hold no item.
    """

    counts = {}

    for transaction in transactions:
        for item in transaction.items:
            counts[item] = counts.get(item, 0) + 1

    if not counts:
        raise ParameterError("No item to compute bounds over.", key="transactions")

    supports = numpy.array(sorted(counts.values()), dtype=float) / len(transactions)

    return float(supports.mean()), float(supports.max())


def search_bounds(
    transactions: Sequence[Transaction], config: TunerConfig
) -> Optional[Tuple[float, float]]:
    """
    Walks the support grid from the largest to the smallest support and
    provides the range in which the rules stay meaningful.

    :return:
        The range, or :code:`None` when no support yields any rule.
    """

    low, high = get_min_sup_bound(transactions)
    grid = numpy.linspace(high, low, config.grid_size)

    new_low, new_high = math.inf, -math.inf
    previous_kurtosis = None
    fallback = None

    for min_support in grid:
        min_support = float(min_support)

        itemsets = gen_frequent_itemsets(
            transactions,
            min_support,
            max_len=config.max_itemset_size,
            algorithm=config.algorithm,
        )

        if not itemsets:
            continue

        rules = filter_lift(gen_rules(itemsets, config.min_confidence))

        if rules and fallback is None:
            fallback = min_support

        if len(rules) / len(itemsets) > config.ratio_threshold:
            logging.debug("Rule ratio guard fired at support %r.", min_support)
            break

        current_kurtosis = kurtosis([x.lift for x in rules])

        if (
            previous_kurtosis is not None
            and abs(previous_kurtosis - current_kurtosis) > config.kurtosis_threshold
        ):
            logging.debug("Kurtosis guard fired at support %r.", min_support)
            break

        previous_kurtosis = current_kurtosis
        new_low = min(new_low, min_support)
        new_high = max(new_high, min_support)

    if math.isinf(new_low):
        if fallback is None:
            return None

        return fallback, fallback

    return new_low, new_high


def generate_rulesets(
    transactions: Sequence[Transaction], config: TunerConfig
) -> Optional[Tuple[Tuple[float, float], List[RuleSet]]]:
    """
    Provides the rulesets to choose among, by ascending minimum support, along
    with the explored range.
    """

    transactions = list(transactions)[-config.history :]

    if not transactions:
        return None

    bounds = search_bounds(transactions, config)

    if bounds is None:
        return None

    supports = numpy.unique(numpy.linspace(bounds[0], bounds[1], config.rulesets))

    return bounds, [
        build_ruleset(
            transactions,
            float(x),
            config.min_confidence,
            max_len=config.max_itemset_size,
            algorithm=config.algorithm,
        )
        for x in supports
    ]


class MinSupportTuner:
    """
    Provides the adaptive selection of the active ruleset.

    Regenerations run on a background thread and are installed
    :code:`generation_latency` viewpoints after they were triggered. Until
    then, the previous ruleset stays active.

    :param config:
        The knobs to work with.
    :param holder:
        Where the active ruleset is published.
    """

    def __init__(
        self, config: TunerConfig, holder: Optional[RuleSetHolder] = None
    ) -> None:
        self.config = config
        self.holder = holder if holder is not None else RuleSetHolder()
        self.state = TunerState()
        self.log: List[TunerEvent] = []

        self._executor: Optional[ThreadPoolExecutor] = None
        self._pending: Optional[Future] = None
        self._pending_due = 0
        self._viewpoint = 0

    def __enter__(self) -> "MinSupportTuner":
        return self

    def __exit__(self, *args) -> None:
        self.close()

    def close(self) -> None:
        """
        Waits for the background generation, if any, and releases the thread.
        """

        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None

    def install(self, rulesets: Iterable[RuleSet]) -> "MinSupportTuner":
        """
        Installs fresh rulesets and activates the middle one.
        """

        rulesets = sorted(rulesets, key=lambda x: x.min_support)

        if not rulesets:
            return self

        self.state.rulesets = rulesets
        self.state.active_index = len(rulesets) // 2
        self.state.fresh = True
        self.holder.set(self.state.active_ruleset)

        logging.info(
            "Installed %d rulesets, supports %r.",
            len(rulesets),
            [x.min_support for x in rulesets],
        )

        return self

    def _install_result(self, result) -> None:
        if result is None:
            logging.warning(
                "Ruleset generation produced nothing usable, keeping the "
                "previous rulesets."
            )
            return

        self.state.bounds, rulesets = result
        self.install(rulesets)

    def gen_a_rules(self, transactions: Sequence[Transaction]) -> "MinSupportTuner":
        """
        Generates and installs the rulesets synchronously.
        """

        self._install_result(generate_rulesets(transactions, self.config))

        return self

    def collect(self, wait: bool = False) -> bool:
        """
        Installs the result of the background generation when it is due.

        :param wait:
            Installs even when it is not due yet.
        """

        if self._pending is None:
            return False

        if not wait and self._viewpoint < self._pending_due:
            return False

        result = self._pending.result()

        self._pending = None
        self.state.generation_in_progress = False
        self._install_result(result)

        return True

    def _trigger(self, transactions: Sequence[Transaction]) -> str:
        if self.state.generation_in_progress:
            return "coalesced"

        transactions = list(transactions)

        if not transactions:
            return "no-history"

        if self.config.generation_latency == 0:
            self.gen_a_rules(transactions)
            return "regenerate"

        if self._executor is None:
            self._executor = ThreadPoolExecutor(max_workers=1)

        self._pending = self._executor.submit(
            generate_rulesets, transactions, self.config
        )
        self._pending_due = self._viewpoint + self.config.generation_latency
        self.state.generation_in_progress = True

        return "regenerate"

    def _select(self, hrd: float) -> str:
        delta = self.config.degradation_threshold
        state = self.state

        if not state.rulesets:
            return "none"

        if state.fresh:
            state.active_index = len(state.rulesets) // 2
            state.fresh = False
            action = "install"
        elif delta < hrd <= 2 * delta:
            state.active_index = max(0, state.active_index - 1)
            action = "step-down"
        elif 0 < hrd <= delta:
            state.active_index = min(len(state.rulesets) - 1, state.active_index + 1)
            action = "step-up"
        else:
            action = "keep"

        self.holder.set(state.active_ruleset)

        return action

    def set_a_rules(self, hrd: float) -> int:
        """
        Selects the active ruleset according to the given degradation.

        :return:
            The index of the active ruleset.
        """

        self._select(hrd)

        return self.state.active_index

    def tune_min_sup(self, hrd: float, transactions: Sequence[Transaction]) -> str:
        """
        Reacts to the given degradation.

        :return:
            What was done, e.g. :code:`regenerate+keep`.
        """

        actions = []

        if hrd > 2 * self.config.degradation_threshold:
            actions.append(self._trigger(transactions))

        actions.append(self._select(hrd))

        logging.debug("Tuner at hrd=%r: %s.", hrd, "+".join(actions))

        return "+".join(actions)

    def on_viewpoint(
        self, viewpoint: int, hit_rate: float, transactions: Sequence[Transaction]
    ) -> TunerEvent:
        """
        Processes the hit rate of a viewpoint.
        """

        self._viewpoint = viewpoint
        self.collect()

        if self.state.last_hit_rate is None:
            hrd = 0.0
        else:
            hrd = get_degradation(self.state.last_hit_rate, hit_rate)

        action = self.tune_min_sup(hrd, transactions)

        self.state.last_hit_rate = hit_rate
        self.state.hrd = hrd

        active = self.state.active_ruleset
        event = TunerEvent(
            viewpoint=viewpoint,
            hit_rate=hit_rate,
            hrd=hrd,
            action=action,
            active_min_support=active.min_support if active is not None else None,
        )
        self.log.append(event)

        return event
