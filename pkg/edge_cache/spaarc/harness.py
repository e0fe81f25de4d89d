"""
SPAARC edge cache simulator - Association and proximity aware prefetching for
edge caches.

Provides the trace-driven replay of an edge cache.

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

import heapq
import itertools
import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from PyFunceble.helpers.hash import HashHelper

from edge_cache.spaarc.arm import RuleSetHolder, build_ruleset
from edge_cache.spaarc.cache import CacheConfig, CacheStats, EdgeCache, LookupResult, Origin
from edge_cache.spaarc.defaults.simulation import ARM_ALGORITHMS, DEFAULT_MAX_ITEMSET_SIZE
from edge_cache.spaarc.domain import AccessEvent, Catalog, Point, Sessionizer, distance, sessionize
from edge_cache.spaarc.exceptions import (
    CapacityError,
    CatalogMismatchError,
    ComparisonError,
    ParameterError,
    TraceFormatError,
)
from edge_cache.spaarc.prefetcher import SpaarcParams, SpaarcPrefetcher
from edge_cache.spaarc.tuner import MinSupportTuner, TunerConfig, TunerEvent

ARRIVAL: int = 0
MOVEMENT: int = 1


class Mode(str, Enum):
    """
    The prefetching modes of a run.
    """

    BASELINE = "baseline"
    ASSOCIATION_ONLY = "association-only"
    SPAARC = "spaarc"
    SPAARC_TUNE = "spaarc-tune"

    @classmethod
    def parse(cls, value: Any) -> "Mode":
        """
        Provides the mode with the given name.
        """

        try:
            return cls(value)
        except ValueError:
            raise ParameterError(
                f"Unknown mode {value!r}. Expected one of "
                f"{', '.join(x.value for x in cls)}.",
                key="mode",
            ) from None

    @property
    def prefetching(self) -> bool:
        """
        Checks if the mode prefetches.
        """

        return self is not Mode.BASELINE

    @property
    def tuning(self) -> bool:
        """
        Checks if the mode tunes the minimum support.
        """

        return self is Mode.SPAARC_TUNE


@dataclass(frozen=True)
class LatencyModel:
    """
    Describes the access latencies, in milliseconds.
    """

    cloud_rtt_ms: float = 60.0
    edge_hit_ms: float = 5.0
    immersion_budget_ms: float = 20.0

    def __post_init__(self) -> None:
        if not self.edge_hit_ms > 0:
            raise ParameterError("edge_hit_ms must be positive.", key="edge_hit_ms")

        if not (self.cloud_rtt_ms >= 0 and math.isfinite(self.cloud_rtt_ms)):
            raise ParameterError(
                "cloud_rtt_ms must be nonnegative.", key="cloud_rtt_ms"
            )

        if not self.immersion_budget_ms > 0:
            raise ParameterError(
                "immersion_budget_ms must be positive.", key="immersion_budget_ms"
            )

    @property
    def miss_ms(self) -> float:
        """
        Provides the latency of a miss: the user waits for the cloud.
        """

        return self.edge_hit_ms + self.cloud_rtt_ms


@dataclass(frozen=True)
class RunConfig:
    """
    Describes a run.
    """

    mode: Mode
    cache: CacheConfig
    spaarc: SpaarcParams = field(default_factory=SpaarcParams)
    tuner: TunerConfig = field(default_factory=TunerConfig)
    latency: LatencyModel = field(default_factory=LatencyModel)
    seed: int = 0
    max_itemset_size: int = DEFAULT_MAX_ITEMSET_SIZE
    algorithm: str = "apriori"
    training_transactions: int = 100
    movement_step: float = 1.0
    walk_speed: float = 1.0
    decision_log: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", Mode.parse(self.mode))

        if self.algorithm not in ARM_ALGORITHMS:
            raise ParameterError(f"Unknown algorithm {self.algorithm!r}.", key="algorithm")

        if not self.training_transactions >= 1:
            raise ParameterError(
                "training_transactions must be positive.", key="training_transactions"
            )

        if not self.movement_step >= 0:
            raise ParameterError("movement_step must be nonnegative.", key="movement_step")

        if not self.walk_speed > 0:
            raise ParameterError("walk_speed must be positive.", key="walk_speed")

    @property
    def viewpoint_size(self) -> int:
        """
        Provides the number of accesses per viewpoint.
        """

        return self.tuner.viewpoint_size


@dataclass(frozen=True)
class Fingerprint:
    """
    Describes what a report was computed over.
    """

    trace_digest: str
    catalog_digest: str
    policy: str
    capacity_mb: float
    seed: int

    def as_dict(self) -> Dict[str, Any]:
        """
        Provides the fingerprint as a dictionary.
        """

        return {
            "trace_digest": self.trace_digest,
            "catalog_digest": self.catalog_digest,
            "policy": self.policy,
            "capacity_mb": self.capacity_mb,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class ViewpointStats:
    """
    Describes a block of accesses.
    """

    viewpoint: int
    hits: int
    misses: int
    on_demand: int
    prefetches: int

    @property
    def hit_rate(self) -> float:
        """
        Provides the hit rate of the block.
        """

        total = self.hits + self.misses

        return self.hits / total if total else 0.0


@dataclass(frozen=True)
class DecisionRecord:
    """
    Describes a prefetch decision.
    """

    time: float
    user_id: int
    missed: int
    fetched_ids: Tuple[int, ...]
    deferred_ids: Tuple[int, ...]


@dataclass
class RunReport:
    """
    Describes the outcome of a run.
    """

    mode: str
    policy: str
    hits: int
    misses: int
    on_demand_fetches: int
    prefetch_count: int
    mean_latency_ms: float
    fingerprint: Optional[Fingerprint] = None
    viewpoints: List[ViewpointStats] = field(default_factory=list)
    cache_stats: CacheStats = field(default_factory=CacheStats)
    coalesced_misses: int = 0
    tuner_log: List[TunerEvent] = field(default_factory=list)
    decision_log: List[DecisionRecord] = field(default_factory=list)
    labels: Dict[str, Any] = field(default_factory=dict)
    prefetch_overhead_ratio: Optional[float] = None

    @property
    def lookups(self) -> int:
        """
        Provides the number of lookups.
        """

        return self.hits + self.misses

    @property
    def hit_rate(self) -> float:
        """
        Provides the overall hit rate.
        """

        return self.hits / self.lookups if self.lookups else 0.0

    def hit_rate_after(self, viewpoints: int) -> float:
        """
        Provides the hit rate of the accesses after the given number of
        viewpoints.
        """

        kept = self.viewpoints[viewpoints:]
        hits = sum(x.hits for x in kept)
        total = hits + sum(x.misses for x in kept)

        return hits / total if total else 0.0


@dataclass(frozen=True)
class Comparison:
    """
    Describes how a treatment run compares to its baseline.
    """

    hit_rate_gain_pct: float
    on_demand_reduction_pct: float
    prefetch_overhead: float


def _ratio(numerator: float, denominator: float) -> float:
    if denominator:
        return numerator / denominator

    return 0.0 if not numerator else math.copysign(math.inf, numerator)


def compare(baseline: RunReport, treatment: RunReport) -> Comparison:
    """
    Compares a treatment run to its baseline.

    :raise ComparisonError:
        When the runs were not computed over the same trace, catalog, cache and
        seed.
    """

    if baseline.fingerprint != treatment.fingerprint:
        raise ComparisonError(
            f"Can't compare runs over different inputs: {baseline.fingerprint!r} "
            f"vs {treatment.fingerprint!r}.",
            key="fingerprint",
        )

    return Comparison(
        hit_rate_gain_pct=_ratio(treatment.hit_rate - baseline.hit_rate, baseline.hit_rate)
        * 100,
        on_demand_reduction_pct=_ratio(
            baseline.on_demand_fetches - treatment.on_demand_fetches,
            baseline.on_demand_fetches,
        )
        * 100,
        prefetch_overhead=_ratio(treatment.prefetch_count, baseline.on_demand_fetches),
    )


def trace_digest(trace: Sequence[AccessEvent]) -> str:
    """
    Provides a digest of the given trace.
    """

    payload = [
        [x.time, x.user_id, x.object_id, x.user_position[0], x.user_position[1]]
        for x in trace
    ]

    return HashHelper().hash_data(json.dumps(payload))


@dataclass
class _Block:
    hits: int = 0
    misses: int = 0
    on_demand: int = 0
    prefetches: int = 0

    @property
    def accesses(self) -> int:
        return self.hits + self.misses


class Simulation:
    """
    Provides the replay of a trace against an edge cache, its prefetcher and
    its tuner.

    Fetches are answered :code:`cloud_rtt_ms` after they are issued. At equal
    times, fetch arrivals are handled first, then the movements of the users,
    then the accesses.

    :param catalog:
        The objects of the environment.
    :param config:
        The run to perform.
    """

    def __init__(self, catalog: Catalog, config: RunConfig) -> None:
        self.catalog = catalog
        self.config = config

        self.cache: Optional[EdgeCache] = None
        self.prefetcher: Optional[SpaarcPrefetcher] = None
        self.tuner: Optional[MinSupportTuner] = None
        self.holder = RuleSetHolder()

        self._reset()

    def _reset(self) -> None:
        self._heap: List[Tuple] = []
        self._counter = itertools.count()
        self._in_flight: Dict[int, Origin] = {}
        self._block = _Block()
        self._viewpoints: List[ViewpointStats] = []
        self._decisions: List[DecisionRecord] = []
        self._on_demand = 0
        self._prefetches = 0
        self._coalesced = 0
        self._lookups = 0
        self._hits = 0

    def _validate(self, trace: Sequence[AccessEvent]) -> None:
        for index, event in enumerate(trace):
            if event.object_id not in self.catalog:
                raise CatalogMismatchError(
                    f"Event {index} references unknown object {event.object_id!r}.",
                    key=str(event.object_id),
                )

            if index and event.time < trace[index - 1].time:
                raise TraceFormatError(
                    f"Trace is not time-ordered at event {index}.", key="time"
                )

        if self.catalog.largest_size_mb() > self.config.cache.capacity_mb:
            raise CapacityError(
                f"The largest object ({self.catalog.largest_size_mb()} MB) does not "
                f"fit in the {self.config.cache.capacity_mb} MB cache.",
                key="capacity_mb",
            )

    def _prime_rules(self, history: Sequence[AccessEvent]) -> None:
        training = sessionize(history, self.config.spaarc.session_gap)[
            : self.config.training_transactions
        ]

        if not training:
            return

        self.holder.set(
            build_ruleset(
                training,
                self.config.spaarc.min_support,
                self.config.spaarc.min_confidence,
                max_len=self.config.max_itemset_size,
                algorithm=self.config.algorithm,
            )
        )

        logging.info(
            "Mined %d static rules out of %d transactions.",
            len(self.holder.get()),
            len(training),
        )

        if self.tuner is not None:
            self.tuner.gen_a_rules(training)

    def _push(self, time: float, kind: int, *payload) -> None:
        heapq.heappush(self._heap, (time, kind, next(self._counter), payload))

    def _drain(self, until: float) -> None:
        while self._heap and self._heap[0][0] <= until:
            time, kind, _, payload = heapq.heappop(self._heap)

            if kind == ARRIVAL:
                self._arrive(*payload)
            else:
                self._move(time, *payload)

    def _arrive(self, object_id: int, origin: Origin) -> None:
        del self._in_flight[object_id]

        self.cache.insert(object_id, origin)

        if self.prefetcher is not None:
            self.prefetcher.on_resident(object_id)

    def _move(self, time: float, user_id: int, position: Point) -> None:
        self.prefetcher.expire(time)

        for object_id in self.prefetcher.poll_lazy_queue(user_id, position, self.cache):
            self._issue(object_id, Origin.PREFETCH, time)

    def _issue(self, object_id: int, origin: Origin, time: float) -> None:
        if object_id in self._in_flight:
            if origin is Origin.ON_DEMAND:
                self._coalesced += 1
            return

        if self.cache.contains(object_id):
            return

        self._in_flight[object_id] = origin

        if origin is Origin.ON_DEMAND:
            self._on_demand += 1
            self._block.on_demand += 1
        else:
            self._prefetches += 1
            self._block.prefetches += 1

        self._push(time + self.config.latency.cloud_rtt_ms / 1000, ARRIVAL, object_id, origin)

    def _schedule_walk(self, event: AccessEvent, following: AccessEvent) -> None:
        step = self.config.movement_step

        if not step or not self.prefetcher.lazy_queue.has_entries_for(event.user_id):
            return

        start, end = event.user_position, following.user_position
        depart = max(
            event.time,
            following.time - distance(start, end) / self.config.walk_speed,
        )

        for k in itertools.count(1):
            time = depart + k * step

            if time >= following.time:
                break

            fraction = (time - depart) / (following.time - depart)
            position = (
                start[0] + fraction * (end[0] - start[0]),
                start[1] + fraction * (end[1] - start[1]),
            )

            self._push(time, MOVEMENT, event.user_id, position)

    def _close_viewpoint(self, sessionizer: Sessionizer, full: bool) -> None:
        stats = ViewpointStats(
            viewpoint=len(self._viewpoints) + 1,
            hits=self._block.hits,
            misses=self._block.misses,
            on_demand=self._block.on_demand,
            prefetches=self._block.prefetches,
        )
        self._viewpoints.append(stats)
        self._block = _Block()

        if self.tuner is None or not full:
            return

        if self.config.tuner.hit_rate_scope == "cumulative":
            hit_rate = self._hits / self._lookups
        else:
            hit_rate = stats.hit_rate

        self.tuner.on_viewpoint(
            stats.viewpoint, hit_rate, sessionizer.last(self.config.tuner.history)
        )

    def _access(self, event: AccessEvent) -> None:
        if self.prefetcher is not None:
            self.prefetcher.expire(event.time)

            for object_id in self.prefetcher.poll_lazy_queue(
                event.user_id, event.user_position, self.cache
            ):
                self._issue(object_id, Origin.PREFETCH, event.time)

        self._lookups += 1

        if self.cache.lookup(event.object_id) is LookupResult.HIT:
            self._hits += 1
            self._block.hits += 1
        else:
            self._block.misses += 1

            if self.prefetcher is None:
                request: Iterable[int] = (event.object_id,)
            else:
                decision = self.prefetcher.on_miss(
                    event.object_id, event.user_id, event.user_position, self.cache
                )
                request = decision.request

                if self.config.decision_log:
                    self._decisions.append(
                        DecisionRecord(
                            time=event.time,
                            user_id=event.user_id,
                            missed=event.object_id,
                            fetched_ids=decision.request,
                            deferred_ids=decision.deferred,
                        )
                    )

            for object_id in request:
                origin = Origin.ON_DEMAND if object_id == event.object_id else Origin.PREFETCH
                self._issue(object_id, origin, event.time)

        if self.prefetcher is not None:
            self.prefetcher.observe(event)

    def run(
        self,
        trace: Iterable[AccessEvent],
        history: Iterable[AccessEvent] = (),
    ) -> RunReport:
        """
        Replays the given trace.

        The static rules, and the first rulesets of the tuner, are mined from
        the sessions of the given history, never from the replayed trace.
        Without history, the prefetcher starts with no rule.

        :raise CatalogMismatchError:
            When the trace references an object which is not in the catalog.
        :raise CapacityError:
            When an object of the catalog is larger than the cache.
        """

        trace = list(trace)
        history = list(history)
        self._validate(trace)
        self._validate(history)
        self._reset()

        mode = self.config.mode

        self.cache = EdgeCache(self.config.cache, self.catalog)
        self.holder = RuleSetHolder()
        self.prefetcher = None
        self.tuner = None

        if mode.tuning:
            self.tuner = MinSupportTuner(self.config.tuner, self.holder)

        if mode.prefetching:
            params = self.config.spaarc

            if mode is Mode.ASSOCIATION_ONLY:
                params = params.association_only()

            self.prefetcher = SpaarcPrefetcher(params, self.catalog, self.holder)
            self._prime_rules(history)

        following: Dict[int, int] = {}
        next_index: List[Optional[int]] = [None] * len(trace)

        for index in range(len(trace) - 1, -1, -1):
            next_index[index] = following.get(trace[index].user_id)
            following[trace[index].user_id] = index

        sessionizer = Sessionizer(self.config.spaarc.session_gap)

        logging.info(
            "Replaying %d events in %s mode with %s.",
            len(trace),
            mode.value,
            self.config.cache.policy,
        )

        try:
            for index, event in enumerate(trace):
                self._drain(event.time)
                self._access(event)
                sessionizer.observe(event)

                if self.prefetcher is not None and next_index[index] is not None:
                    self._schedule_walk(event, trace[next_index[index]])

                if self._block.accesses == self.config.viewpoint_size:
                    self._close_viewpoint(sessionizer, full=True)

            if self._block.accesses:
                self._close_viewpoint(sessionizer, full=False)

            self._drain(math.inf)
        finally:
            if self.tuner is not None:
                self.tuner.close()

        return self._report(trace)

    def _report(self, trace: Sequence[AccessEvent]) -> RunReport:
        stats = self.cache.stats
        latency = self.config.latency

        if stats.lookups:
            mean_latency = (
                stats.hits * latency.edge_hit_ms + stats.misses * latency.miss_ms
            ) / stats.lookups
        else:
            mean_latency = 0.0

        report = RunReport(
            mode=self.config.mode.value,
            policy=self.config.cache.policy,
            hits=stats.hits,
            misses=stats.misses,
            on_demand_fetches=self._on_demand,
            prefetch_count=self._prefetches,
            mean_latency_ms=mean_latency,
            fingerprint=Fingerprint(
                trace_digest=trace_digest(trace),
                catalog_digest=self.catalog.digest(),
                policy=self.config.cache.policy,
                capacity_mb=self.config.cache.capacity_mb,
                seed=self.config.seed,
            ),
            viewpoints=list(self._viewpoints),
            cache_stats=CacheStats(**stats.as_dict()),
            coalesced_misses=self._coalesced,
            tuner_log=list(self.tuner.log) if self.tuner is not None else [],
            decision_log=list(self._decisions),
        )

        logging.info(
            "Replay finished: hit rate %.4f, %d on-demand fetches, %d prefetches.",
            report.hit_rate,
            report.on_demand_fetches,
            report.prefetch_count,
        )

        return report


def run(
    trace: Iterable[AccessEvent],
    catalog: Catalog,
    run_config: RunConfig,
    history: Iterable[AccessEvent] = (),
) -> RunReport:
    """
    Replays the given trace against the given catalog, with rules mined from
    the given history.
    """

    return Simulation(catalog, run_config).run(trace, history)
