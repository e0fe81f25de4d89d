"""
SPAARC edge cache simulator - Association and proximity aware prefetching for
edge caches.

Provides the description of a workload.

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

import math
from dataclasses import dataclass, field
from typing import FrozenSet, Optional, Tuple

from edge_cache.spaarc.domain import AccessEvent, Catalog, Point
from edge_cache.spaarc.exceptions import ParameterError


@dataclass(frozen=True)
class Rect:
    """
    Describes an axis-aligned obstacle.
    """

    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self) -> None:
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ParameterError(f"Degenerated rectangle {self!r}.", key="obstacles")

    @classmethod
    def from_string(cls, value: str) -> "Rect":
        """
        Parses a :code:`x0:y0:x1:y1` rectangle.
        """

        try:
            return cls(*(float(x) for x in value.split(":")))
        except (TypeError, ValueError):
            raise ParameterError(
                f"Invalid rectangle {value!r}, expected x0:y0:x1:y1.",
                key="obstacles",
            ) from None

    @property
    def area(self) -> float:
        """
        Provides the area of the rectangle.
        """

        return (self.x1 - self.x0) * (self.y1 - self.y0)

    def contains(self, point: Point) -> bool:
        """
        Checks if the given point is inside (or on the border of) the rectangle.
        """

        return self.x0 <= point[0] <= self.x1 and self.y0 <= point[1] <= self.y1


DEFAULT_OBSTACLES: Tuple[Rect, ...] = (
    Rect(40.0, 40.0, 60.0, 60.0),
    Rect(130.0, 120.0, 160.0, 135.0),
)


@dataclass(frozen=True)
class WorkloadConfig:
    """
    Describes a synthetic workload.
    """

    n_objects: int = 50
    n_users: int = 100
    planted_support: float = 0.30
    planted_itemset_fraction: float = 0.2
    region_size: float = 200.0
    obstacle_rects: Tuple[Rect, ...] = DEFAULT_OBSTACLES
    arrival_rate: float = 0.05
    interaction_mean: float = 10.0
    interaction_std: float = 3.0
    seed: int = 42
    horizon: Optional[float] = None
    filler_mean: float = 4.0
    walk_speed: float = 1.0
    min_dwell: float = 0.5
    min_spacing: float = 10.0
    max_spacing: float = 15.0
    size_min_mb: float = 10.0
    size_max_mb: float = 15.0
    shift_at: Optional[float] = None
    max_placement_attempts: int = 5000
    max_access_gap: float = 40.0
    history_sessions: int = 100

    def __post_init__(self) -> None:
        object.__setattr__(self, "obstacle_rects", tuple(self.obstacle_rects))

        checks = (
            ("n_objects", self.n_objects >= 1),
            ("n_users", self.n_users >= 1),
            ("planted_support", 0 < self.planted_support <= 1),
            ("planted_itemset_fraction", 0 < self.planted_itemset_fraction <= 1),
            ("region_size", self.region_size > 0),
            ("arrival_rate", self.arrival_rate > 0),
            ("interaction_mean", self.interaction_mean > 0),
            ("interaction_std", 0 <= self.interaction_std < self.interaction_mean),
            ("seed", self.seed >= 0),
            ("horizon", self.horizon is None or self.horizon > 0),
            ("filler_mean", self.filler_mean >= 0),
            ("walk_speed", self.walk_speed > 0),
            ("min_dwell", self.min_dwell > 0),
            ("min_spacing", 0 < self.min_spacing <= self.max_spacing),
            ("size_min_mb", 0 < self.size_min_mb <= self.size_max_mb),
            ("shift_at", self.shift_at is None or 0 <= self.shift_at < 1),
            ("max_placement_attempts", self.max_placement_attempts >= 1),
            ("max_access_gap", self.max_access_gap > 2 * self.min_dwell),
            ("history_sessions", self.history_sessions >= 0),
        )

        for key, valid in checks:
            if not valid:
                raise ParameterError(
                    f"Invalid {key}: {getattr(self, key)!r}.", key=key
                )

    @property
    def free_area(self) -> float:
        """
        Provides the area of the region which is not covered by an obstacle.
        """

        return self.region_size**2 - math.fsum(x.area for x in self.obstacle_rects)

    def is_free(self, point: Point) -> bool:
        """
        Checks if the given point is in the region and outside every obstacle.
        """

        inside = all(0 <= x <= self.region_size for x in point)

        return inside and not any(x.contains(point) for x in self.obstacle_rects)


@dataclass(frozen=True)
class GeneratedWorkload:
    """
    Describes a catalog, the trace over it and what was planted in it.
    """

    catalog: Catalog
    trace: Tuple[AccessEvent, ...]
    planted_itemsets: Tuple[FrozenSet[int], ...] = ()
    shifted_itemsets: Tuple[FrozenSet[int], ...] = field(default=())
    history: Tuple[AccessEvent, ...] = ()
