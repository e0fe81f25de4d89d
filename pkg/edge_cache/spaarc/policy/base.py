"""
SPAARC edge cache simulator - Association and proximity aware prefetching for
edge caches.

Provides the base of all our eviction policies.

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

from typing import TYPE_CHECKING, Tuple

if TYPE_CHECKING:  # pragma: no cover
    from edge_cache.spaarc.cache import CacheEntry, EdgeCache


class EvictionPolicyBase:
    """
    Provides the base of all eviction policies.

    A policy only ranks the resident entries: the entry with the smallest key
    is evicted first. Ties are broken by the smaller insertion sequence number.
    """

    name: str = "BASE"

    def victim_key(self, entry: "CacheEntry", cache: "EdgeCache") -> Tuple:
        """
        Provides the ranking key of the given entry.
        """

        raise NotImplementedError()

    def select_victim(self, cache: "EdgeCache") -> int:
        """
        Provides the id of the next object to evict.

        :raise ValueError:
            When the cache is empty.
        """

        entries = cache.entries.values()

        if not entries:
            raise ValueError("Nothing to evict.")

        return min(
            entries,
            key=lambda x: (self.victim_key(x, cache), x.insertion_seq),
        ).object_id

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__} {self.name}>"
