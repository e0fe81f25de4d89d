"""
SPAARC edge cache simulator - Association and proximity aware prefetching for
edge caches.

Provides the value types shared by every part of the simulator.

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

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy
from PyFunceble.helpers.hash import HashHelper
from scipy.spatial import KDTree

from edge_cache.spaarc.defaults.simulation import DEFAULT_SESSION_GAP
from edge_cache.spaarc.exceptions import (
    CatalogMismatchError,
    ParameterError,
    TraceFormatError,
)

Point = Tuple[float, float]


def distance(a: Point, b: Point) -> float:
    """
    Provides the euclidean distance between two points.
    """

    return math.hypot(a[0] - b[0], a[1] - b[1])


def _is_finite_point(point: Point) -> bool:
    return len(point) == 2 and all(math.isfinite(x) for x in point)


@dataclass(frozen=True)
class VirtualObject:
    """
    Describes a cacheable AR asset.
    """

    id: int
    size_mb: float
    position: Point

    def __post_init__(self) -> None:
        if not self.size_mb > 0:
            raise ParameterError(
                f"Object {self.id} has a non-positive size ({self.size_mb!r}).",
                key="size_mb",
            )

        if not _is_finite_point(self.position):
            raise ParameterError(
                f"Object {self.id} has a non-finite position ({self.position!r}).",
                key="position",
            )


@dataclass(frozen=True)
class AccessEvent:
    """
    Describes one interaction of a user with an object.
    """

    time: float
    user_id: int
    object_id: int
    user_position: Point

    def __post_init__(self) -> None:
        if not self.time >= 0:
            raise ParameterError(
                f"Negative event time ({self.time!r}).", key="time"
            )


@dataclass(frozen=True)
class Transaction:
    """
    Describes the distinct objects a user interacted with during a session.
    """

    tx_id: int
    items: FrozenSet[int]

    def __post_init__(self) -> None:
        if not isinstance(self.items, frozenset):
            object.__setattr__(self, "items", frozenset(self.items))

        if not self.items:
            raise ParameterError(
                f"Transaction {self.tx_id} is empty.", key="items"
            )


class Catalog:
    """
    Provides the collection of objects of an environment, keyed by their id.

    :param objects:
        The objects of the environment.
    """

    def __init__(self, objects: Iterable[VirtualObject]) -> None:
        self._objects: Dict[int, VirtualObject] = {}

        for obj in objects:
            if obj.id in self._objects:
                raise ParameterError(
                    f"Duplicate object id {obj.id}.", key="object_id"
                )

            self._objects[obj.id] = obj

        self._ids: Tuple[int, ...] = tuple(sorted(self._objects))

        if self._ids:
            self._tree: Optional[KDTree] = KDTree(
                numpy.array([self._objects[x].position for x in self._ids])
            )
        else:
            self._tree = None

    def __getitem__(self, object_id: int) -> VirtualObject:
        try:
            return self._objects[object_id]
        except KeyError:
            raise CatalogMismatchError(
                f"Object {object_id!r} is not in the catalog.", key=str(object_id)
            ) from None

    def __contains__(self, object_id: int) -> bool:
        return object_id in self._objects

    def __iter__(self) -> Iterator[VirtualObject]:
        return (self._objects[x] for x in self._ids)

    def __len__(self) -> int:
        return len(self._ids)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Catalog) and list(self) == list(other)

    def ids(self) -> Tuple[int, ...]:
        """
        Provides the sorted ids of the catalog.
        """

        return self._ids

    def total_size_mb(self) -> float:
        """
        Provides the total size of the catalog.
        """

        return math.fsum(x.size_mb for x in self)

    def largest_size_mb(self) -> float:
        """
        Provides the size of the largest object.
        """

        return max((x.size_mb for x in self), default=0.0)

    def capacity_from_fraction(self, fraction: float) -> float:
        """
        Converts a fraction of the total catalog size into megabytes.
        """

        if not 0 < fraction <= 1:
            raise ParameterError(
                f"Capacity fraction must be in (0, 1], got {fraction!r}.",
                key="capacity_fraction",
            )

        return self.total_size_mb() * fraction

    def within(self, position: Point, radius: float) -> List[int]:
        """
        Provides the (sorted) ids of the objects within the given radius of the
        given position.
        """

        if self._tree is None:
            return []

        if math.isinf(radius):
            return list(self._ids)

        indexes = self._tree.query_ball_point(list(position), r=radius)

        return sorted(self._ids[x] for x in indexes)

    def nearest_neighbor_distances(self) -> numpy.ndarray:
        """
        Provides the distance of every object to its nearest neighbor.
        """

        if len(self) < 2:
            return numpy.array([])

        distances, _ = self._tree.query(self._tree.data, k=2)

        return distances[:, 1]

    def digest(self) -> str:
        """
        Provides a digest of the catalog content.
        """

        payload = [[x.id, x.size_mb, list(x.position)] for x in self]

        return HashHelper().hash_data(json.dumps(payload))


@dataclass
class _Session:
    seq: int
    user_id: int
    start_time: float
    last_time: float
    items: Dict[int, None] = field(default_factory=dict)


class Sessionizer:
    """
    Groups a time-ordered stream of events into per-user sessions.

    :param gap:
        The maximum number of seconds between two consecutive events of the
        same session.
    """

    def __init__(self, gap: float = DEFAULT_SESSION_GAP) -> None:
        if not gap > 0:
            raise ParameterError(
                f"Session gap must be positive, got {gap!r}.", key="session_gap"
            )

        self.gap = gap

        self._open: Dict[int, _Session] = {}
        self._closed: List[_Session] = []
        self._counter = itertools.count()
        self._last_time: Optional[float] = None

    def observe(self, event: AccessEvent) -> "Sessionizer":
        """
        Feeds an event.
        """

        if self._last_time is not None and event.time < self._last_time:
            raise TraceFormatError(
                f"Trace is not time-ordered at t={event.time!r}.", key="time"
            )

        self._last_time = event.time

        session = self._open.get(event.user_id)

        if session is None or event.time - session.last_time > self.gap:
            if session is not None:
                self._closed.append(session)

            session = _Session(
                seq=next(self._counter),
                user_id=event.user_id,
                start_time=event.time,
                last_time=event.time,
            )
            self._open[event.user_id] = session

        session.last_time = event.time
        session.items[event.object_id] = None

        return self

    def transactions(self, include_open: bool = True) -> List[Transaction]:
        """
        Provides the transactions, ordered by session start time.

        :param include_open:
            Whether the sessions which may still grow have to be included.
        """

        sessions = list(self._closed)

        if include_open:
            sessions.extend(self._open.values())

        sessions.sort(key=lambda x: (x.start_time, x.seq))

        return [
            Transaction(tx_id=index, items=frozenset(x.items))
            for index, x in enumerate(sessions)
        ]

    def last(self, count: int) -> List[Transaction]:
        """
        Provides the most recent transactions.
        """

        if count <= 0:
            return []

        return self.transactions()[-count:]


def sessionize(
    trace: Iterable[AccessEvent], gap: float = DEFAULT_SESSION_GAP
) -> List[Transaction]:
    """
    Groups a trace into transactions: one per user session.
    """

    sessionizer = Sessionizer(gap)

    for event in trace:
        sessionizer.observe(event)

    return sessionizer.transactions()


def split_history(
    trace: Sequence[AccessEvent], gap: float, count: int
) -> Tuple[List[AccessEvent], List[AccessEvent]]:
    """
    Splits a time-ordered trace into its first sessions and the rest.

    At most half of the sessions go to the history, so that there is always
    something left to replay.

    :param gap:
        The maximum number of seconds between two consecutive events of the
        same session.
    :param count:
        The number of sessions, by start time, to put in the history.

    :return:
        The history and the rest of the trace.
    """

    if not gap > 0:
        raise ParameterError(
            f"Session gap must be positive, got {gap!r}.", key="session_gap"
        )

    counter = itertools.count()
    last_seen: Dict[int, Tuple[int, float]] = {}
    labels: List[int] = []

    for event in trace:
        session = last_seen.get(event.user_id)

        if session is None or event.time - session[1] > gap:
            session = (next(counter), event.time)

        last_seen[event.user_id] = (session[0], event.time)
        labels.append(session[0])

    total = next(counter)
    count = max(0, min(count, total // 2))

    history = [x for x, label in zip(trace, labels) if label < count]
    rest = [x for x, label in zip(trace, labels) if label >= count]

    return history, rest
