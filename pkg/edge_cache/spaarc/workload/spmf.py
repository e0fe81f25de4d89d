"""
SPAARC edge cache simulator - Association and proximity aware prefetching for
edge caches.

Provides the ingestion of SPMF transaction databases.

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
import os
import re
from dataclasses import replace
from typing import Iterable, List, Optional

import numpy
from PyFunceble.helpers.download import DownloadHelper
from PyFunceble.helpers.file import FileHelper

from edge_cache.spaarc.defaults.markers import SPMF_METADATA_PREFIXES, URL_REGEX
from edge_cache.spaarc.defaults.paths import TRANSACTIONS_FILENAME
from edge_cache.spaarc.domain import Catalog, Transaction, VirtualObject
from edge_cache.spaarc.exceptions import TraceFormatError
from edge_cache.spaarc.workload.config import GeneratedWorkload, WorkloadConfig
from edge_cache.spaarc.workload.environment import generate_environment
from edge_cache.spaarc.workload.generator import session_starts, walk_session


def fetch_spmf(url: str, destination_dir: str) -> str:
    """
    Downloads a remote SPMF file into the given directory.

    :return:
        The path of the local copy.
    """

    os.makedirs(destination_dir, exist_ok=True)

    destination = os.path.join(
        destination_dir, os.path.basename(url.split("?")[0]) or TRANSACTIONS_FILENAME
    )

    logging.info("Downloading %r into %r.", url, destination)
    DownloadHelper(url).download_text(destination=destination)

    return destination


def load_spmf(
    path: str, *, download_dir: Optional[str] = None, limit: Optional[int] = None
) -> List[Transaction]:
    """
    Reads an SPMF transaction database: one transaction of whitespace separated
    item ids per line. Blank and metadata lines are skipped.

    :param path:
        A local path or an http(s) URL.
    :param download_dir:
        Where remote files are stored.
    :param limit:
        The maximum number of transactions to read.

    :raise TraceFormatError:
        When the file is missing or holds a token which is not a nonnegative
        integer.
    """

    if re.match(URL_REGEX, path):
        path = fetch_spmf(path, download_dir or os.getcwd())

    file_helper = FileHelper(path)

    if not file_helper.exists():
        raise TraceFormatError(f"SPMF file {path!r} not found.", key=path)

    transactions = []

    with file_helper.open("r", encoding="utf-8") as file_stream:
        for line_number, line in enumerate(file_stream, start=1):
            stripped = line.strip()

            if not stripped or stripped.startswith(SPMF_METADATA_PREFIXES):
                continue

            items = set()

            for token in stripped.split():
                if not token.isdigit():
                    raise TraceFormatError(
                        f"Line {line_number}: {token!r} is not an item id.",
                        key=f"line:{line_number}",
                    )

                items.add(int(token))

            transactions.append(Transaction(tx_id=len(transactions), items=items))

            if limit is not None and len(transactions) >= limit:
                break

    logging.info("Read %d transactions from %r.", len(transactions), path)

    return transactions


def write_spmf(transactions: Iterable[Transaction], path: str) -> str:
    """
    Writes the given transactions in the SPMF format.
    """

    FileHelper(path).write(
        "".join(" ".join(str(x) for x in sorted(t.items)) + "\n" for t in transactions),
        overwrite=True,
    )

    return path


def spmf_to_trace(
    transactions: List[Transaction],
    config: WorkloadConfig,
    rng: Optional[numpy.random.Generator] = None,
) -> GeneratedWorkload:
    """
    Turns transactions without positions into a trace: the items are placed in
    a synthesized environment and each transaction becomes the session of its
    own user.

    :raise CapacityError:
        When the items can't be placed.
    """

    items = sorted({x for t in transactions for x in t.items})

    if not items:
        return GeneratedWorkload(catalog=Catalog([]), trace=())

    # Grow the region with the number of items so that the placement stays
    # feasible.
    region_size = max(
        config.region_size, 2 * config.max_spacing * math.sqrt(len(items))
    )
    placement = generate_environment(
        replace(config, n_objects=len(items), region_size=region_size)
    )

    catalog = Catalog(
        VirtualObject(id=item, size_mb=obj.size_mb, position=obj.position)
        for item, obj in zip(items, placement)
    )
    walk_config = replace(config, region_size=region_size)

    if rng is None:
        rng = numpy.random.default_rng([config.seed, 2])

    starts = session_starts(replace(config, n_users=len(transactions), horizon=None), rng)
    trace = []

    for user_id, (transaction, start) in enumerate(zip(transactions, starts)):
        entry_point = tuple(float(x) for x in rng.uniform(0, region_size, size=2))

        trace.extend(
            walk_session(
                user_id,
                sorted(transaction.items),
                float(start),
                entry_point,
                catalog,
                walk_config,
                rng,
            )
        )

    trace.sort(key=lambda x: (x.time, x.user_id))

    return GeneratedWorkload(catalog=catalog, trace=tuple(trace))
