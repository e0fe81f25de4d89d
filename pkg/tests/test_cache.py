"""
SPAARC edge cache simulator - Association and proximity aware prefetching for
edge caches.

Tests of our edge cache and its eviction policies.

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

from typing import Dict, List, Sequence, Tuple

import numpy
import pytest

from edge_cache.spaarc.cache import (
    CAPACITY_EPSILON,
    CacheConfig,
    EdgeCache,
    LookupResult,
    Origin,
)
from edge_cache.spaarc.domain import Catalog, VirtualObject
from edge_cache.spaarc.exceptions import (
    CapacityError,
    CatalogMismatchError,
    ParameterError,
)
from edge_cache.spaarc.policy.all import POLICIES, get_policy, normalize_policy_name

from conftest import make_catalog

GOLDEN_ACCESSES = [0, 1, 2, 0, 3, 0, 4, 1, 2, 0, 1, 3, 3, 4, 0]

# policy -> (hit steps, evictions in order), capacity of 3 unit objects.
GOLDEN = {
    "FIFO": ([4, 11, 13, 15], [0, 1, 2, 3, 0, 4, 1, 2]),
    "LRU": ([4, 6, 11, 13], [1, 2, 3, 0, 4, 2, 0, 1]),
    "LFU": ([4, 6, 10, 11, 13, 15], [1, 2, 3, 4, 2, 1]),
    "POP": ([4, 6, 10, 11, 13, 15], [1, 2, 3, 4, 2, 1]),
}


def replay(cache: EdgeCache, accesses: Sequence[int]) -> Tuple[List[int], List[int]]:
    """
    Replays the given accesses: a lookup, then an on-demand insert on miss.
    """

    hits, evictions = [], []

    for step, object_id in enumerate(accesses, start=1):
        if cache.lookup(object_id) is LookupResult.HIT:
            hits.append(step)
        else:
            evictions.extend(cache.insert(object_id, Origin.ON_DEMAND))

    return hits, evictions


@pytest.mark.parametrize("policy", sorted(GOLDEN))
def test_golden_trace(policy: str) -> None:
    cache = EdgeCache(CacheConfig(capacity_mb=3, policy=policy), make_catalog(5))

    hits, evictions = replay(cache, GOLDEN_ACCESSES)

    assert (hits, evictions) == GOLDEN[policy]
    assert cache.stats.hits == len(hits)
    assert cache.stats.misses == len(GOLDEN_ACCESSES) - len(hits)
    assert cache.stats.lookups == len(GOLDEN_ACCESSES)
    assert cache.stats.evictions == len(evictions)


def test_cold_lookup_misses() -> None:
    cache = EdgeCache(CacheConfig(capacity_mb=2), make_catalog(3))

    assert cache.lookup(0) is LookupResult.MISS

    cache.insert(0)

    assert cache.lookup(0) is LookupResult.HIT


def test_fifo_evicts_first_inserted() -> None:
    cache = EdgeCache(CacheConfig(capacity_mb=2, policy="FIFO"), make_catalog(3))

    for object_id in (0, 1, 2):
        cache.insert(object_id)

    assert cache.lookup(0) is LookupResult.MISS
    assert cache.resident() == (1, 2)


def test_lru_evicts_least_recent() -> None:
    catalog = make_catalog(3, size_mb=10)
    cache = EdgeCache(CacheConfig(capacity_mb=25, policy="LRU"), catalog)

    cache.insert(0)
    cache.insert(1)
    cache.lookup(0)

    assert cache.insert(2) == [1]


def test_lfu_evicts_least_frequent() -> None:
    catalog = make_catalog(3, size_mb=10)
    cache = EdgeCache(CacheConfig(capacity_mb=25, policy="LFU"), catalog)

    cache.insert(0)
    cache.insert(1)
    cache.lookup(0)
    cache.lookup(0)

    assert cache.entries[0].access_count == 3
    assert cache.entries[1].access_count == 1
    assert cache.insert(2) == [1]


def test_pop_remembers_evicted_objects() -> None:
    results = {}

    for policy in ("LFU", "POP"):
        cache = EdgeCache(CacheConfig(capacity_mb=2, policy=policy), make_catalog(6))

        for _ in range(3):
            cache.lookup(5)

        cache.insert(5)
        cache.insert(0)
        results[policy] = cache.insert(1)

    assert results == {"LFU": [5], "POP": [0]}


def test_prefetch_does_not_count_as_access() -> None:
    cache = EdgeCache(CacheConfig(capacity_mb=3, policy="LFU"), make_catalog(3))

    cache.insert(0, Origin.PREFETCH)
    cache.insert(1, Origin.ON_DEMAND)

    assert cache.entries[0].access_count == 0
    assert cache.popularity[0] == 0
    assert cache.stats.prefetch_insertions == 1
    assert cache.stats.insertions == 2

    cache.lookup(0)

    assert cache.entries[0].access_count == 1
    assert cache.popularity[0] == 1


def test_insert_resident_is_a_noop() -> None:
    cache = EdgeCache(CacheConfig(capacity_mb=2), make_catalog(3))

    cache.insert(0)
    cache.insert(1)

    assert cache.insert(0) == []
    assert cache.resident() == (0, 1)
    assert cache.stats.insertions == 2


def test_variable_sizes_evict_until_fit() -> None:
    catalog = Catalog(
        [
            VirtualObject(id=0, size_mb=4, position=(0, 0)),
            VirtualObject(id=1, size_mb=4, position=(1, 0)),
            VirtualObject(id=2, size_mb=9, position=(2, 0)),
        ]
    )
    cache = EdgeCache(CacheConfig(capacity_mb=10, policy="FIFO"), catalog)

    cache.insert(0)
    cache.insert(1)

    assert cache.insert(2) == [0, 1]
    assert cache.used_mb == 9


def test_unfittable_object_is_rejected() -> None:
    catalog = Catalog(
        [
            VirtualObject(id=0, size_mb=1, position=(0, 0)),
            VirtualObject(id=1, size_mb=11, position=(1, 0)),
        ]
    )
    cache = EdgeCache(CacheConfig(capacity_mb=10), catalog)
    cache.insert(0)

    with pytest.raises(CapacityError):
        cache.insert(1)

    assert cache.resident() == (0,)
    assert cache.stats.evictions == 0


def test_contains_does_not_touch_metadata() -> None:
    cache = EdgeCache(CacheConfig(capacity_mb=1), make_catalog(2))
    cache.insert(0)
    before = (cache.entries[0].last_access_seq, cache.entries[0].access_count)

    assert cache.contains(0)
    assert 0 in cache
    assert not cache.contains(1)
    assert (cache.entries[0].last_access_seq, cache.entries[0].access_count) == before
    assert cache.stats.lookups == 0

    cache.insert(1)

    assert not cache.contains(0)


def test_unknown_object() -> None:
    cache = EdgeCache(CacheConfig(capacity_mb=1), make_catalog(2))

    with pytest.raises(CatalogMismatchError):
        cache.lookup(7)

    with pytest.raises(CatalogMismatchError):
        cache.insert(7)


@pytest.mark.parametrize("capacity", [0, -5, float("inf")])
def test_config_rejects_invalid_capacity(capacity: float) -> None:
    with pytest.raises(ParameterError):
        CacheConfig(capacity_mb=capacity)


def test_policy_names() -> None:
    assert sorted(POLICIES) == ["FIFO", "LFU", "LRU", "POP"]
    assert normalize_policy_name(" lru ") == "LRU"
    assert CacheConfig(capacity_mb=1, policy="pop").policy == "POP"
    assert get_policy("fifo").name == "FIFO"

    with pytest.raises(ParameterError):
        normalize_policy_name("ARC")


def test_config_from_fraction() -> None:
    config = CacheConfig.from_fraction(make_catalog(50, size_mb=2), 0.2, "LRU")

    assert config.capacity_mb == pytest.approx(20)
    assert config.policy == "LRU"


@pytest.mark.parametrize("policy", sorted(POLICIES))
def test_capacity_never_exceeded(policy: str) -> None:
    rng = numpy.random.default_rng([11, len(policy)])
    catalog = Catalog(
        VirtualObject(id=x, size_mb=float(rng.uniform(0.5, 5)), position=(x, 0))
        for x in range(20)
    )
    cache = EdgeCache(CacheConfig(capacity_mb=12, policy=policy), catalog)
    previous = cache.stats.as_dict()

    for _ in range(25_000):
        object_id = int(rng.integers(20))
        kind = rng.random()

        if kind < 0.5:
            cache.lookup(object_id)
        else:
            origin = Origin.PREFETCH if kind < 0.7 else Origin.ON_DEMAND
            cache.insert(object_id, origin)

        assert cache.used_mb <= cache.capacity_mb + CAPACITY_EPSILON

        current = cache.stats.as_dict()
        assert all(current[x] >= previous[x] for x in current)
        previous = current


class ReferenceCache:
    """
    A plain list based cache of unit-sized objects.
    """

    def __init__(self, capacity: int, policy: str) -> None:
        self.capacity = capacity
        self.policy = policy
        self.residents: List[int] = []
        self.last: Dict[int, int] = {}
        self.count: Dict[int, int] = {}
        self.clock = 0

    def access(self, object_id: int) -> Tuple[bool, List[int]]:
        self.clock += 1

        if object_id in self.residents:
            self.last[object_id] = self.clock
            self.count[object_id] += 1
            return True, []

        evicted = []

        if len(self.residents) >= self.capacity:
            if self.policy == "FIFO":
                victim = self.residents[0]
            elif self.policy == "LRU":
                victim = min(self.residents, key=lambda x: self.last[x])
            else:
                # residents is in insertion order, min keeps the first one.
                victim = min(self.residents, key=lambda x: self.count[x])

            self.residents.remove(victim)
            evicted.append(victim)

        self.clock += 1
        self.residents.append(object_id)
        self.last[object_id] = self.clock
        self.count[object_id] = 1

        return False, evicted


@pytest.mark.parametrize("policy", ["FIFO", "LRU", "LFU"])
def test_matches_reference(policy: str) -> None:
    rng = numpy.random.default_rng([5, len(policy)])

    for _ in range(50):
        objects = int(rng.integers(2, 11))
        capacity = int(rng.integers(1, objects + 1))
        accesses = [int(x) for x in rng.integers(objects, size=200)]

        cache = EdgeCache(
            CacheConfig(capacity_mb=capacity, policy=policy), make_catalog(objects)
        )
        reference = ReferenceCache(capacity, policy)

        for object_id in accesses:
            hit, evicted = reference.access(object_id)

            assert (cache.lookup(object_id) is LookupResult.HIT) == hit

            if not hit:
                assert cache.insert(object_id) == evicted
