"""
SPAARC edge cache simulator - Association and proximity aware prefetching for
edge caches.

Provides the byte-capacity bounded edge cache.

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
import logging
import math
from collections import Counter
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Dict, List, Tuple

from edge_cache.spaarc.domain import Catalog
from edge_cache.spaarc.exceptions import CapacityError, ParameterError
from edge_cache.spaarc.policy.all import get_policy, normalize_policy_name

# Tolerance on the capacity check, absorbs the rounding of size sums.
CAPACITY_EPSILON: float = 1e-9


class Origin(str, Enum):
    """
    Why an object entered the cache.
    """

    ON_DEMAND = "on-demand"
    PREFETCH = "prefetch"


class LookupResult(str, Enum):
    """
    The outcome of a lookup.
    """

    HIT = "hit"
    MISS = "miss"


@dataclass(frozen=True)
class CacheConfig:
    """
    Describes the size and eviction policy of a cache.
    """

    capacity_mb: float
    policy: str = "FIFO"

    def __post_init__(self) -> None:
        if not (self.capacity_mb > 0 and math.isfinite(self.capacity_mb)):
            raise ParameterError(
                f"Cache capacity must be positive, got {self.capacity_mb!r}.",
                key="capacity_mb",
            )

        object.__setattr__(self, "policy", normalize_policy_name(self.policy))

    @classmethod
    def from_fraction(
        cls, catalog: Catalog, fraction: float, policy: str = "FIFO"
    ) -> "CacheConfig":
        """
        Provides a config whose capacity is a fraction of the total catalog
        size.
        """

        return cls(capacity_mb=catalog.capacity_from_fraction(fraction), policy=policy)


@dataclass
class CacheEntry:
    """
    Describes a resident object and the metadata the policies rank it with.
    """

    object_id: int
    size_mb: float
    origin: Origin
    insertion_seq: int
    last_access_seq: int
    access_count: int


@dataclass
class CacheStats:
    """
    Describes the counters of a cache.
    """

    hits: int = 0
    misses: int = 0
    insertions: int = 0
    evictions: int = 0
    prefetch_insertions: int = 0

    @property
    def lookups(self) -> int:
        """
        Provides the number of lookups.
        """

        return self.hits + self.misses

    def as_dict(self) -> Dict[str, int]:
        """
        Provides the counters as a dictionary.
        """

        return asdict(self)


class EdgeCache:
    """
    Provides an object cache bounded by the sum of the sizes of its residents.

    :param config:
        The size and policy to work with.
    :param catalog:
        The objects which may be cached.
    """

    def __init__(self, config: CacheConfig, catalog: Catalog) -> None:
        self.config = config
        self.catalog = catalog
        self.policy = get_policy(config.policy)

        self.entries: Dict[int, CacheEntry] = {}
        self.popularity: Counter = Counter()
        self.stats = CacheStats()

        self._clock = itertools.count(1)

    @property
    def capacity_mb(self) -> float:
        """
        Provides the capacity of the cache.
        """

        return self.config.capacity_mb

    @property
    def used_mb(self) -> float:
        """
        Provides the size occupied by the residents.
        """

        return math.fsum(x.size_mb for x in self.entries.values())

    def contains(self, object_id: int) -> bool:
        """
        Checks if the given object is resident. Nothing is updated.
        """

        return object_id in self.entries

    def __contains__(self, object_id: int) -> bool:
        return self.contains(object_id)

    def __len__(self) -> int:
        return len(self.entries)

    def resident(self) -> Tuple[int, ...]:
        """
        Provides the ids of the residents, in insertion order.
        """

        return tuple(
            x.object_id
            for x in sorted(self.entries.values(), key=lambda x: x.insertion_seq)
        )

    def lookup(self, object_id: int) -> LookupResult:
        """
        Looks the given object up.

        :raise CatalogMismatchError:
            When the object is not in the catalog.
        """

        self.catalog[object_id]  # pylint: disable=pointless-statement

        seq = next(self._clock)
        self.popularity[object_id] += 1

        entry = self.entries.get(object_id)

        if entry is None:
            self.stats.misses += 1
            return LookupResult.MISS

        entry.last_access_seq = seq
        entry.access_count += 1
        self.stats.hits += 1

        return LookupResult.HIT

    def insert(self, object_id: int, origin: Origin = Origin.ON_DEMAND) -> List[int]:
        """
        Makes the given object resident.

        :return:
            The ids of the evicted objects, in eviction order.

        :raise CapacityError:
            When the object is larger than the whole cache.
        :raise CatalogMismatchError:
            When the object is not in the catalog.
        """

        size_mb = self.catalog[object_id].size_mb

        if size_mb > self.capacity_mb + CAPACITY_EPSILON:
            raise CapacityError(
                f"Object {object_id} ({size_mb} MB) does not fit in a "
                f"{self.capacity_mb} MB cache.",
                key=str(object_id),
            )

        if object_id in self.entries:
            return []

        evicted = []

        while self.used_mb + size_mb > self.capacity_mb + CAPACITY_EPSILON:
            victim = self.policy.select_victim(self)

            del self.entries[victim]
            self.stats.evictions += 1
            evicted.append(victim)

        if evicted:
            logging.debug(
                "%s evicted %r to make room for %r.", self.policy.name, evicted, object_id
            )

        seq = next(self._clock)
        origin = Origin(origin)

        self.entries[object_id] = CacheEntry(
            object_id=object_id,
            size_mb=size_mb,
            origin=origin,
            insertion_seq=seq,
            last_access_seq=seq,
            access_count=1 if origin is Origin.ON_DEMAND else 0,
        )

        self.stats.insertions += 1

        if origin is Origin.PREFETCH:
            self.stats.prefetch_insertions += 1

        return evicted
