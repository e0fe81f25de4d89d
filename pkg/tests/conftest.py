"""
SPAARC edge cache simulator - Association and proximity aware prefetching for
edge caches.

Provides the shared fixtures of our tests.

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

from typing import Iterable, List, Optional, Sequence, Tuple

import pytest

from edge_cache.spaarc.domain import AccessEvent, Catalog, VirtualObject


def make_catalog(
    count: int, *, size_mb: float = 1.0, spacing: float = 10.0
) -> Catalog:
    """
    Provides a catalog of :code:`count` objects of the same size, laid on a
    line.
    """

    return Catalog(
        VirtualObject(id=x, size_mb=size_mb, position=(x * spacing, 0.0))
        for x in range(count)
    )


def make_trace(
    accesses: Iterable[Tuple[float, int, int]],
    catalog: Optional[Catalog] = None,
) -> List[AccessEvent]:
    """
    Provides a trace from :code:`(time, user, object)` triples. The user stands
    on the object when a catalog is given.
    """

    return [
        AccessEvent(
            time=float(time),
            user_id=user,
            object_id=obj,
            user_position=catalog[obj].position if catalog else (0.0, 0.0),
        )
        for time, user, obj in accesses
    ]


def sessions_trace(sessions: Sequence[Sequence[int]], gap: float = 100.0) -> List[AccessEvent]:
    """
    Provides a trace where each given item list is the session of its own
    user, one session after the other.
    """

    accesses = []
    now = 0.0

    for user_id, items in enumerate(sessions):
        for item in items:
            accesses.append((now, user_id, item))
            now += 1.0

        now += gap

    return make_trace(accesses)


@pytest.fixture
def line_catalog() -> Catalog:
    """
    Provides ten unit-sized objects, ten meters apart.
    """

    return make_catalog(10)
