"""
SPAARC edge cache simulator - Association and proximity aware prefetching for
edge caches.

Provides the association and proximity aware prefetcher.

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
from collections import OrderedDict, deque
from dataclasses import dataclass, field, replace
from typing import (
    TYPE_CHECKING,
    Deque,
    Dict,
    Iterator,
    List,
    Optional,
    Sequence,
    Set,
    Tuple,
)

from edge_cache.spaarc.arm import RuleSetHolder, match_rules
from edge_cache.spaarc.defaults.simulation import (
    DEFAULT_LAZY_QUEUE_CAPACITY,
    DEFAULT_SESSION_GAP,
    WINDOW_SCOPES,
)
from edge_cache.spaarc.domain import AccessEvent, Catalog, Point
from edge_cache.spaarc.exceptions import CatalogMismatchError, ParameterError

if TYPE_CHECKING:  # pragma: no cover
    from edge_cache.spaarc.cache import EdgeCache


@dataclass(frozen=True)
class SpaarcParams:
    """
    Describes the knobs of the prefetcher.
    """

    min_support: float = 0.30
    min_confidence: float = 0.45
    association_factor_threshold: float = 1.0
    window: int = 50
    proximity_threshold: float = 15.0
    history_window: int = 10
    window_scope: str = "global"
    lazy_queue_capacity: int = DEFAULT_LAZY_QUEUE_CAPACITY
    session_gap: float = DEFAULT_SESSION_GAP

    def __post_init__(self) -> None:
        for key in ("min_support", "min_confidence"):
            if not 0 < getattr(self, key) <= 1:
                raise ParameterError(
                    f"{key} must be in (0, 1], got {getattr(self, key)!r}.", key=key
                )

        for key in ("window", "history_window", "lazy_queue_capacity"):
            if not (isinstance(getattr(self, key), int) and getattr(self, key) >= 1):
                raise ParameterError(
                    f"{key} must be a positive integer, got {getattr(self, key)!r}.",
                    key=key,
                )

        if not (
            self.association_factor_threshold >= 0
            and not math.isnan(self.association_factor_threshold)
        ):
            raise ParameterError(
                "association_factor_threshold must be nonnegative.",
                key="association_factor_threshold",
            )

        if not self.proximity_threshold > 0:
            raise ParameterError(
                "proximity_threshold must be positive.", key="proximity_threshold"
            )

        if not self.session_gap > 0:
            raise ParameterError("session_gap must be positive.", key="session_gap")

        if self.window_scope not in WINDOW_SCOPES:
            raise ParameterError(
                f"Unknown window scope {self.window_scope!r}.", key="window_scope"
            )

    @property
    def alpha(self) -> float:
        """
        Provides the smoothing factor of the association factor.
        """

        return 2 / (1 + self.window)

    def association_only(self) -> "SpaarcParams":
        """
        Provides a copy which keeps every matched object: no association factor
        filter, no proximity filter.
        """

        return replace(
            self, association_factor_threshold=0.0, proximity_threshold=math.inf
        )


class AssociationFactorTable:
    """
    Provides the exponentially smoothed reference count of the objects.
    """

    def __init__(self) -> None:
        self.factors: Dict[int, float] = {}
        self.references: Dict[int, int] = {}

    def __getitem__(self, object_id: int) -> float:
        return self.factors.get(object_id, 0.0)

    def __contains__(self, object_id: int) -> bool:
        return object_id in self.factors

    def update(self, object_id: int, references: int, alpha: float) -> float:
        """
        Folds a new reference count into the factor of the given object.

        :return:
            The new factor.
        """

        new = references * alpha + self[object_id] * (1 - alpha)

        self.factors[object_id] = new
        self.references[object_id] = references

        return new


@dataclass
class LazyEntry:
    """
    Describes a deferred object.
    """

    object_id: int
    lift: float
    users: Set[int] = field(default_factory=set)


class LazyFetchQueue:
    """
    Provides the bounded queue of the objects waiting for a user to come
    closer. The oldest entry is dropped on overflow.

    :param capacity:
        The maximum number of entries.
    """

    def __init__(self, capacity: int = DEFAULT_LAZY_QUEUE_CAPACITY) -> None:
        self.capacity = capacity

        self._entries: "OrderedDict[int, LazyEntry]" = OrderedDict()
        self._by_user: Dict[int, Set[int]] = {}

    def __contains__(self, object_id: int) -> bool:
        return object_id in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[LazyEntry]:
        return iter(list(self._entries.values()))

    def users(self) -> Set[int]:
        """
        Provides the users which have pending entries.
        """

        return set(self._by_user)

    def has_entries_for(self, user_id: int) -> bool:
        """
        Checks if the given user triggered a pending entry.
        """

        return user_id in self._by_user

    def defer(self, object_id: int, lift: float, user_id: int) -> bool:
        """
        Defers the given object on behalf of the given user.

        :return:
            :code:`True` when a new entry was created.
        """

        entry = self._entries.get(object_id)
        created = entry is None

        if created:
            if len(self._entries) >= self.capacity:
                dropped = next(iter(self._entries))
                logging.debug("Lazy queue full, dropping %r.", dropped)
                self.discard(dropped)

            entry = LazyEntry(object_id=object_id, lift=lift)
            self._entries[object_id] = entry
        else:
            entry.lift = max(entry.lift, lift)

        entry.users.add(user_id)
        self._by_user.setdefault(user_id, set()).add(object_id)

        return created

    def discard(self, object_id: int) -> bool:
        """
        Removes the given object from the queue.
        """

        entry = self._entries.pop(object_id, None)

        if entry is None:
            return False

        for user_id in entry.users:
            self._forget(user_id, object_id)

        return True

    def _forget(self, user_id: int, object_id: int) -> None:
        objects = self._by_user.get(user_id)

        if objects is not None:
            objects.discard(object_id)

            if not objects:
                del self._by_user[user_id]

    def entries_for(self, user_id: int) -> List[LazyEntry]:
        """
        Provides the entries triggered by the given user.
        """

        return [self._entries[x] for x in sorted(self._by_user.get(user_id, ()))]

    def expire_users(self, users: Set[int]) -> List[int]:
        """
        Forgets the given users. Entries left without any user are dropped.

        :return:
            The dropped objects.
        """

        dropped = []

        for user_id in sorted(users):
            for object_id in sorted(self._by_user.pop(user_id, ())):
                entry = self._entries[object_id]
                entry.users.discard(user_id)

                if not entry.users:
                    del self._entries[object_id]
                    dropped.append(object_id)

        return dropped


@dataclass(frozen=True)
class PrefetchDecision:
    """
    Describes what to do after a miss.

    :code:`fetch_now` holds the missed object followed by the objects close
    enough to be fetched right away. :code:`request` is :code:`fetch_now`
    without the resident objects, :code:`deferred` the objects which went into
    the lazy queue.
    """

    missed: int
    fetch_now: Tuple[int, ...]
    deferred: Tuple[int, ...]
    request: Tuple[int, ...]


class SpaarcPrefetcher:
    """
    Provides the prefetching decisions of an edge.

    :param params:
        The knobs to work with.
    :param catalog:
        The objects of the environment.
    :param rules:
        The holder of the active ruleset.
    """

    def __init__(
        self,
        params: SpaarcParams,
        catalog: Catalog,
        rules: Optional[RuleSetHolder] = None,
    ) -> None:
        self.params = params
        self.catalog = catalog
        self.rules = rules if rules is not None else RuleSetHolder()

        self.factor_table = AssociationFactorTable()
        self.lazy_queue = LazyFetchQueue(params.lazy_queue_capacity)

        self._histories: Dict[int, Deque[int]] = {}
        self._windows: Dict[int, Deque[AccessEvent]] = {}
        self._global_window: Deque[AccessEvent] = deque(maxlen=params.window)
        self._last_seen: Dict[int, float] = {}

    def history(self, user_id: int) -> Tuple[int, ...]:
        """
        Provides the most recent objects of the given user.
        """

        return tuple(self._histories.get(user_id, ()))

    def window_events(self, user_id: int) -> List[AccessEvent]:
        """
        Provides the interaction window the association factors are computed
        over.
        """

        if self.params.window_scope == "user":
            return list(self._windows.get(user_id, ()))

        return list(self._global_window)

    def observe(self, event: AccessEvent) -> "SpaarcPrefetcher":
        """
        Records an interaction.
        """

        self._histories.setdefault(
            event.user_id, deque(maxlen=self.params.history_window)
        ).append(event.object_id)

        if self.params.window_scope == "user":
            self._windows.setdefault(
                event.user_id, deque(maxlen=self.params.window)
            ).append(event)
        else:
            self._global_window.append(event)

        self._last_seen[event.user_id] = event.time

        return self

    def update_association_factor(
        self, object_id: int, window_events: Sequence[AccessEvent]
    ) -> float:
        """
        Updates the association factor of the given object with its number of
        occurrences in the given window.
        """

        references = sum(1 for x in window_events if x.object_id == object_id)

        return self.factor_table.update(object_id, references, self.params.alpha)

    def on_miss(
        self,
        missed_object_id: int,
        user_id: int,
        user_position: Point,
        cache: "EdgeCache",
    ) -> PrefetchDecision:
        """
        Decides what to fetch after a miss.

        :raise CatalogMismatchError:
            When the missed object is not in the catalog.
        """

        if missed_object_id not in self.catalog:
            raise CatalogMismatchError(
                f"Object {missed_object_id!r} is not in the catalog.",
                key=str(missed_object_id),
            )

        context = set(self.history(user_id))
        context.add(missed_object_id)

        matches = match_rules(self.rules.get(), context)
        window_events = self.window_events(user_id)

        fetch_now = [missed_object_id]
        deferred = []
        nearby = set(
            self.catalog.within(user_position, self.params.proximity_threshold)
        )

        for object_id, rule in matches:
            factor = self.update_association_factor(object_id, window_events)

            if factor < self.params.association_factor_threshold:
                continue

            if object_id in nearby:
                fetch_now.append(object_id)
                self.lazy_queue.discard(object_id)
            elif not cache.contains(object_id):
                self.lazy_queue.defer(object_id, rule.lift, user_id)
                deferred.append(object_id)

        decision = PrefetchDecision(
            missed=missed_object_id,
            fetch_now=tuple(fetch_now),
            deferred=tuple(deferred),
            request=tuple(x for x in fetch_now if not cache.contains(x)),
        )

        logging.debug(
            "Miss of %r by user %r: %d matches, request %r, deferred %r.",
            missed_object_id,
            user_id,
            len(matches),
            decision.request,
            decision.deferred,
        )

        return decision

    def poll_lazy_queue(
        self, user_id: int, user_position: Point, cache: "EdgeCache"
    ) -> List[int]:
        """
        Provides (and removes) the deferred objects of the given user which are
        now close enough.
        """

        if not self.lazy_queue.has_entries_for(user_id):
            return []

        ready = []
        nearby = set(
            self.catalog.within(user_position, self.params.proximity_threshold)
        )

        for entry in self.lazy_queue.entries_for(user_id):
            if cache.contains(entry.object_id):
                self.lazy_queue.discard(entry.object_id)
                continue

            if entry.object_id in nearby:
                self.lazy_queue.discard(entry.object_id)
                ready.append(entry)

        ready.sort(key=lambda x: (-x.lift, x.object_id))

        return [x.object_id for x in ready]

    def expire(self, now: float) -> List[int]:
        """
        Drops the deferred entries of the users whose session ended.
        """

        ended = {
            x
            for x in self.lazy_queue.users()
            if now - self._last_seen.get(x, now) > self.params.session_gap
        }

        if not ended:
            return []

        return self.lazy_queue.expire_users(ended)

    def on_resident(self, object_id: int) -> bool:
        """
        Drops the given object from the lazy queue once it is resident.
        """

        return self.lazy_queue.discard(object_id)
