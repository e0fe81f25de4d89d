"""
SPAARC edge cache simulator - Association and proximity aware prefetching for
edge caches.

Provides the placement of the objects in the environment.

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
from typing import List, Optional

import numpy

from edge_cache.spaarc.domain import Catalog, VirtualObject
from edge_cache.spaarc.exceptions import CapacityError
from edge_cache.spaarc.workload.config import WorkloadConfig

# Densest packing of equal discs in the plane.
PACKING_DENSITY: float = math.pi / (2 * math.sqrt(3))


def environment_rng(seed: int) -> numpy.random.Generator:
    """
    Provides the random generator of the placement.
    """

    return numpy.random.default_rng([seed, 0])


def _place_first(
    config: WorkloadConfig, rng: numpy.random.Generator
) -> Optional[numpy.ndarray]:
    for _ in range(config.max_placement_attempts):
        candidate = rng.uniform(0, config.region_size, size=2)

        if config.is_free(tuple(candidate)):
            return candidate

    return None


def generate_environment(
    config: WorkloadConfig, rng: Optional[numpy.random.Generator] = None
) -> Catalog:
    """
    Places the objects of the environment.

    Each new object is drawn at a uniform distance in
    :code:`[min_spacing, max_spacing]` of a random object already placed, and
    rejected when it falls outside the region, inside an obstacle or nearer
    than :code:`min_spacing` to another object. Every object thus has its
    nearest neighbor within :code:`[min_spacing, max_spacing]`.

    :raise CapacityError:
        When the region can't hold the objects or when the placement gave up.
    """

    if rng is None:
        rng = environment_rng(config.seed)

    needed = config.n_objects * math.pi * (config.min_spacing / 2) ** 2

    if needed > PACKING_DENSITY * config.free_area:
        raise CapacityError(
            f"A {config.region_size} wide region can't hold {config.n_objects} "
            f"objects {config.min_spacing} units apart.",
            key="n_objects",
        )

    first = _place_first(config, rng)

    if first is None:
        raise CapacityError("No free position in the region.", key="obstacles")

    placed: List[numpy.ndarray] = [first]
    positions = numpy.array([first])

    while len(placed) < config.n_objects:
        for _ in range(config.max_placement_attempts):
            anchor = positions[rng.integers(len(placed))]
            radius = rng.uniform(config.min_spacing, config.max_spacing)
            angle = rng.uniform(0, 2 * math.pi)

            candidate = anchor + radius * numpy.array([math.cos(angle), math.sin(angle)])

            if not config.is_free(tuple(candidate)):
                continue

            nearest = numpy.hypot(*(positions - candidate).T).min()

            if nearest < config.min_spacing:
                continue

            placed.append(candidate)
            positions = numpy.vstack([positions, candidate])
            break
        else:
            raise CapacityError(
                f"Gave up placing object {len(placed)} after "
                f"{config.max_placement_attempts} attempts.",
                key="n_objects",
            )

    sizes = rng.uniform(config.size_min_mb, config.size_max_mb, size=config.n_objects)

    catalog = Catalog(
        VirtualObject(
            id=index,
            size_mb=float(size),
            position=(float(position[0]), float(position[1])),
        )
        for index, (size, position) in enumerate(zip(sizes, placed))
    )
    spacing = catalog.nearest_neighbor_distances()

    if spacing.size:
        logging.debug(
            "Placed %d objects, nearest neighbors %.2f to %.2f apart.",
            config.n_objects,
            spacing.min(),
            spacing.max(),
        )

    return catalog
