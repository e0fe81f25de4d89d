"""
SPAARC edge cache simulator - Association and proximity aware prefetching for
edge caches.

Provides the synthetic trace generator.

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
from typing import FrozenSet, List, Optional, Sequence, Tuple

import numpy

from edge_cache.spaarc.domain import AccessEvent, Catalog, Point, distance
from edge_cache.spaarc.exceptions import ParameterError
from edge_cache.spaarc.workload.config import GeneratedWorkload, WorkloadConfig

MIN_PLANTED_SIZE: int = 2
MAX_PLANTED_SIZE: int = 4


def trace_rng(seed: int) -> numpy.random.Generator:
    """
    Provides the random generator of the sessions.
    """

    return numpy.random.default_rng([seed, 1])


def history_rng_of(seed: int) -> numpy.random.Generator:
    """
    Provides the random generator of the history sessions.
    """

    return numpy.random.default_rng([seed, 2])


def partition_itemsets(
    items: Sequence[int], rng: numpy.random.Generator
) -> Tuple[FrozenSet[int], ...]:
    """
    Splits the given items into disjoint itemsets of 2 to 4 items.
    """

    itemsets = []
    remaining = list(items)

    while len(remaining) >= MIN_PLANTED_SIZE:
        size = int(rng.integers(MIN_PLANTED_SIZE, MAX_PLANTED_SIZE + 1))
        size = min(size, len(remaining))

        # Never leave a single item behind.
        if len(remaining) - size == 1:
            size = size + 1 if size < MAX_PLANTED_SIZE else size - 1

        itemsets.append(frozenset(int(x) for x in remaining[:size]))
        remaining = remaining[size:]

    return tuple(itemsets)


def plant_itemsets(
    catalog: Catalog, config: WorkloadConfig, rng: numpy.random.Generator
) -> List[Tuple[FrozenSet[int], ...]]:
    """
    Provides the families of planted itemsets: one, or two disjoint ones when
    the access pattern shifts.
    """

    phases = 1 if config.shift_at is None else 2
    count = max(MIN_PLANTED_SIZE, int(round(config.planted_itemset_fraction * len(catalog))))

    if count * phases > len(catalog):
        raise ParameterError(
            f"{len(catalog)} objects can't hold {phases} families of {count} "
            "planted items.",
            key="planted_itemset_fraction",
        )

    chosen = rng.permutation(numpy.array(catalog.ids()))[: count * phases]

    return [
        partition_itemsets(chosen[x * count : (x + 1) * count], rng)
        for x in range(phases)
    ]


def session_starts(
    config: WorkloadConfig, rng: numpy.random.Generator
) -> numpy.ndarray:
    """
    Provides the start times of the sessions, from a Poisson process.
    """

    scale = 1 / config.arrival_rate

    if config.horizon is None:
        return numpy.cumsum(rng.exponential(scale=scale, size=config.n_users))

    starts = []
    current = 0.0

    while True:
        current += rng.exponential(scale=scale)

        if current > config.horizon:
            break

        starts.append(current)

    return numpy.array(starts)


def walk_session(
    user_id: int,
    items: Sequence[int],
    start_time: float,
    entry_point: Point,
    catalog: Catalog,
    config: WorkloadConfig,
    rng: numpy.random.Generator,
) -> List[AccessEvent]:
    """
    Walks a user through the given items: always to the nearest object not
    visited yet, dwelling at each object.

    The user walks at :code:`walk_speed` but hurries when needed: two
    consecutive accesses are never more than :code:`max_access_gap` apart, so
    that a session stays a single transaction.
    """

    events = []
    dwell = 0.0
    remaining = sorted(set(int(x) for x in items))
    position = entry_point
    now = start_time

    while remaining:
        distances = [distance(position, catalog[x].position) for x in remaining]
        index = int(numpy.argmin(distances))
        object_id = remaining.pop(index)

        travel = distances[index] / config.walk_speed

        if events:
            travel = min(travel, config.max_access_gap - dwell)

        now += travel
        position = catalog[object_id].position

        events.append(
            AccessEvent(
                time=float(now), user_id=user_id, object_id=object_id, user_position=position
            )
        )

        dwell = float(
            numpy.clip(
                rng.normal(config.interaction_mean, config.interaction_std),
                config.min_dwell,
                config.max_access_gap / 2,
            )
        )
        now += dwell

    return events


def build_sessions(
    starts: Sequence[float],
    families: Sequence[Tuple[FrozenSet[int], ...]],
    shift_index: int,
    pool: numpy.ndarray,
    catalog: Catalog,
    config: WorkloadConfig,
    rng: numpy.random.Generator,
    first_user: int = 0,
) -> List[AccessEvent]:
    """
    Builds one session per start time, in time order.

    Each planted itemset is part of a session with probability
    :code:`planted_support`, the rest of the session is filled with a Poisson
    number of non-planted objects.
    """

    trace = []

    for index, start in enumerate(starts):
        family = families[0] if index < shift_index else families[-1]
        items: List[int] = []

        for itemset in family:
            if rng.random() < config.planted_support:
                items.extend(sorted(itemset))

        fillers = int(rng.poisson(config.filler_mean))

        if not items:
            fillers = max(fillers, 1)

        fillers = min(fillers, len(pool))

        if fillers:
            items.extend(int(x) for x in rng.choice(pool, size=fillers, replace=False))

        if not items:
            continue

        entry_point = tuple(float(x) for x in rng.uniform(0, config.region_size, size=2))

        trace.extend(
            walk_session(
                first_user + index,
                items,
                float(start),
                entry_point,
                catalog,
                config,
                rng,
            )
        )

    trace.sort(key=lambda x: (x.time, x.user_id))

    return trace


def generate_trace(
    config: WorkloadConfig,
    catalog: Catalog,
    rng: Optional[numpy.random.Generator] = None,
) -> GeneratedWorkload:
    """
    Generates the sessions of the users over the given catalog.

    Next to the replayed trace, :code:`history_sessions` earlier sessions are
    generated from their own random stream. They follow the access pattern
    the replay starts with and are where the static rules are mined from.
    """

    if rng is None:
        rng = trace_rng(config.seed)

    families = plant_itemsets(catalog, config, rng)
    planted = {x for family in families for itemset in family for x in itemset}
    pool = numpy.array([x for x in catalog.ids() if x not in planted])

    starts = session_starts(config, rng)
    shift_index = (
        len(starts) if config.shift_at is None else int(config.shift_at * len(starts))
    )

    trace = build_sessions(starts, families, shift_index, pool, catalog, config, rng)

    history: List[AccessEvent] = []

    if config.history_sessions:
        history_rng = history_rng_of(config.seed)
        history_starts = numpy.cumsum(
            history_rng.exponential(
                scale=1 / config.arrival_rate, size=config.history_sessions
            )
        )
        history = build_sessions(
            history_starts,
            families[:1],
            len(history_starts),
            pool,
            catalog,
            config,
            history_rng,
            first_user=len(starts),
        )

    logging.info(
        "Generated %d events over %d sessions and %d objects "
        "(%d history events).",
        len(trace),
        len(starts),
        len(catalog),
        len(history),
    )

    return GeneratedWorkload(
        catalog=catalog,
        trace=tuple(trace),
        planted_itemsets=families[0],
        shifted_itemsets=families[1] if len(families) > 1 else (),
        history=tuple(history),
    )
