"""
SPAARC edge cache simulator - Association and proximity aware prefetching for
edge caches.

Provides the readers and writers of our files.

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

import os
from typing import (
    TYPE_CHECKING,
    Any,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)

import pandas
from PyFunceble.helpers.file import FileHelper

from edge_cache.spaarc.arm import AssociationRule, RuleSet
from edge_cache.spaarc.defaults.paths import (
    CATALOG_HEADER,
    DECISION_LOG_HEADER,
    ITEM_SEPARATOR,
    REPORT_HEADER,
    RULES_HEADER,
    RULES_SEPARATOR,
    SUMMARY_MARKER,
    TRACE_HEADER,
    TUNER_LOG_HEADER,
)
from edge_cache.spaarc.domain import AccessEvent, Catalog, VirtualObject
from edge_cache.spaarc.exceptions import TraceFormatError

if TYPE_CHECKING:  # pragma: no cover
    from edge_cache.spaarc.harness import DecisionRecord, RunReport
    from edge_cache.spaarc.tuner import TunerEvent


def join_items(items: Iterable[int]) -> str:
    """
    Provides the :code:`;` joined representation of a set of ids.
    """

    return ITEM_SEPARATOR.join(str(x) for x in sorted(items))


def split_items(value: Any) -> FrozenSet[int]:
    """
    Parses a :code:`;` joined set of ids.
    """

    value = "" if pandas.isna(value) else str(value)

    return frozenset(int(x) for x in value.split(ITEM_SEPARATOR) if x.strip())


def write_frame(
    frame: pandas.DataFrame, path: str, *, sep: str = ","
) -> str:
    """
    Writes the given frame as CSV. The file is replaced atomically.
    """

    directory = os.path.dirname(path)

    if directory:
        os.makedirs(directory, exist_ok=True)

    temporary = f"{path}.tmp"

    frame.to_csv(
        temporary, sep=sep, index=False, lineterminator="\n", encoding="utf-8"
    )
    os.replace(temporary, path)

    return path


def write_rows(
    rows: Sequence[Mapping[str, Any]], columns: Sequence[str], path: str
) -> str:
    """
    Writes the given rows as CSV, in the given column order.
    """

    return write_frame(pandas.DataFrame(list(rows), columns=list(columns)), path)


def read_frame(
    path: str, expected_header: Sequence[str], *, sep: str = ","
) -> pandas.DataFrame:
    """
    Reads a CSV file and checks its header.

    :raise TraceFormatError:
        When the file is missing or its header is not the expected one.
    """

    if not FileHelper(path).exists():
        raise TraceFormatError(f"File {path!r} not found.", key=path)

    try:
        frame = pandas.read_csv(
            path, sep=sep, encoding="utf-8", dtype=str, keep_default_na=False
        )
    except (pandas.errors.ParserError, pandas.errors.EmptyDataError) as exception:
        raise TraceFormatError(
            f"Unreadable file {path!r}: {exception}", key=path
        ) from exception

    if list(frame.columns) != list(expected_header):
        raise TraceFormatError(
            f"Unexpected header {list(frame.columns)!r} in {path!r}, expected "
            f"{list(expected_header)!r}.",
            key=path,
        )

    return frame


def _convert(frame: pandas.DataFrame, column: str, kind: type, path: str) -> List:
    try:
        return [kind(x) for x in frame[column]]
    except (TypeError, ValueError):
        raise TraceFormatError(
            f"Column {column!r} of {path!r} holds an invalid value.", key=column
        ) from None


def write_trace(trace: Iterable[AccessEvent], path: str) -> str:
    """
    Writes a trace.
    """

    return write_rows(
        [
            {
                "time": x.time,
                "user_id": x.user_id,
                "object_id": x.object_id,
                "x": x.user_position[0],
                "y": x.user_position[1],
            }
            for x in trace
        ],
        TRACE_HEADER,
        path,
    )


def read_trace(path: str) -> List[AccessEvent]:
    """
    Reads a trace.
    """

    frame = read_frame(path, TRACE_HEADER)
    columns = [
        _convert(frame, "time", float, path),
        _convert(frame, "user_id", int, path),
        _convert(frame, "object_id", int, path),
        _convert(frame, "x", float, path),
        _convert(frame, "y", float, path),
    ]

    trace = [
        AccessEvent(time=t, user_id=u, object_id=o, user_position=(x, y))
        for t, u, o, x, y in zip(*columns)
    ]

    if any(b.time < a.time for a, b in zip(trace, trace[1:])):
        raise TraceFormatError(f"Trace {path!r} is not time-ordered.", key="time")

    return trace


def write_catalog(catalog: Catalog, path: str) -> str:
    """
    Writes a catalog.
    """

    return write_rows(
        [
            {
                "object_id": x.id,
                "size_mb": x.size_mb,
                "x": x.position[0],
                "y": x.position[1],
            }
            for x in catalog
        ],
        CATALOG_HEADER,
        path,
    )


def read_catalog(path: str) -> Catalog:
    """
    Reads a catalog.
    """

    frame = read_frame(path, CATALOG_HEADER)
    columns = [
        _convert(frame, "object_id", int, path),
        _convert(frame, "size_mb", float, path),
        _convert(frame, "x", float, path),
        _convert(frame, "y", float, path),
    ]

    return Catalog(
        VirtualObject(id=i, size_mb=s, position=(x, y)) for i, s, x, y in zip(*columns)
    )


def write_itemsets(itemsets: Iterable[FrozenSet[int]], path: str) -> str:
    """
    Writes one :code:`;` joined itemset per line.
    """

    directory = os.path.dirname(path)

    if directory:
        os.makedirs(directory, exist_ok=True)

    FileHelper(path).write(
        "".join(join_items(x) + "\n" for x in itemsets), overwrite=True
    )

    return path


def read_itemsets(path: str) -> List[FrozenSet[int]]:
    """
    Reads the itemsets written by :func:`write_itemsets`.
    """

    file_helper = FileHelper(path)

    if not file_helper.exists():
        raise TraceFormatError(f"File {path!r} not found.", key=path)

    return [split_items(x) for x in file_helper.read().splitlines() if x.strip()]


def dump_ruleset(ruleset: RuleSet, path: str) -> str:
    """
    Writes the rules of a ruleset, pipe delimited.
    """

    frame = pandas.DataFrame(
        [
            {
                "antecedent": join_items(x.antecedent),
                "consequent": join_items(x.consequent),
                "support": x.support,
                "confidence": x.confidence,
                "lift": x.lift,
            }
            for x in ruleset
        ],
        columns=RULES_HEADER,
    )

    return write_frame(frame, path, sep=RULES_SEPARATOR)


def load_ruleset(
    path: str,
    *,
    min_support: Optional[float] = None,
    min_confidence: Optional[float] = None,
    generated_from: int = 0,
) -> RuleSet:
    """
    Reads the rules written by :func:`dump_ruleset`.

    The thresholds are not part of the file: when not given, the smallest
    support and confidence of the rules are used.
    """

    frame = read_frame(path, RULES_HEADER, sep=RULES_SEPARATOR)

    rules = [
        AssociationRule(
            antecedent=split_items(a),
            consequent=split_items(c),
            support=s,
            confidence=f,
            lift=l,
        )
        for a, c, s, f, l in zip(
            frame["antecedent"],
            frame["consequent"],
            _convert(frame, "support", float, path),
            _convert(frame, "confidence", float, path),
            _convert(frame, "lift", float, path),
        )
    ]

    if min_support is None:
        min_support = min((x.support for x in rules), default=1.0)

    if min_confidence is None:
        min_confidence = min((x.confidence for x in rules), default=1.0)

    return RuleSet(
        rules=tuple(rules),
        min_support=min_support,
        min_confidence=min_confidence,
        generated_from=generated_from,
    )


def write_report(report: "RunReport", path: str) -> str:
    """
    Writes a report: one row per viewpoint, then the summary row.
    """

    rows: List[Dict[str, Any]] = [
        {
            "viewpoint": x.viewpoint,
            "hits": x.hits,
            "misses": x.misses,
            "hit_rate": x.hit_rate,
            "on_demand": x.on_demand,
            "prefetches": x.prefetches,
        }
        for x in report.viewpoints
    ]
    rows.append(
        {
            "viewpoint": SUMMARY_MARKER,
            "hits": report.hits,
            "misses": report.misses,
            "hit_rate": report.hit_rate,
            "on_demand": report.on_demand_fetches,
            "prefetches": report.prefetch_count,
        }
    )

    return write_rows(rows, REPORT_HEADER, path)


def read_report_summary(path: str) -> Dict[str, Any]:
    """
    Provides the summary row of a report.
    """

    frame = read_frame(path, REPORT_HEADER)
    summary = frame[frame["viewpoint"] == SUMMARY_MARKER]

    if summary.empty:
        raise TraceFormatError(f"No summary row in {path!r}.", key=path)

    row = summary.iloc[-1]

    try:
        return {
            "hits": int(row["hits"]),
            "misses": int(row["misses"]),
            "hit_rate": float(row["hit_rate"]),
            "on_demand": int(row["on_demand"]),
            "prefetches": int(row["prefetches"]),
        }
    except (TypeError, ValueError):
        raise TraceFormatError(f"Invalid summary row in {path!r}.", key=path) from None


def write_tuner_log(events: Iterable["TunerEvent"], path: str) -> str:
    """
    Writes the tuner events.
    """

    return write_rows(
        [
            {
                "viewpoint": x.viewpoint,
                "hit_rate": x.hit_rate,
                "hrd": x.hrd,
                "action": x.action,
                "active_min_support": x.active_min_support,
            }
            for x in events
        ],
        TUNER_LOG_HEADER,
        path,
    )


def write_decision_log(records: Iterable["DecisionRecord"], path: str) -> str:
    """
    Writes the prefetch decisions.
    """

    return write_rows(
        [
            {
                "time": x.time,
                "user_id": x.user_id,
                "missed": x.missed,
                "fetched_ids": ITEM_SEPARATOR.join(str(y) for y in x.fetched_ids),
                "deferred_ids": ITEM_SEPARATOR.join(str(y) for y in x.deferred_ids),
            }
            for x in records
        ],
        DECISION_LOG_HEADER,
        path,
    )


def read_decision_log(path: str) -> List[Tuple[float, int, int, Tuple[int, ...], Tuple[int, ...]]]:
    """
    Reads the prefetch decisions, ids in their logged order.
    """

    frame = read_frame(path, DECISION_LOG_HEADER)

    def ordered(value: Any) -> Tuple[int, ...]:
        value = "" if pandas.isna(value) else str(value)
        return tuple(int(x) for x in value.split(ITEM_SEPARATOR) if x.strip())

    return [
        (float(t), int(u), int(m), ordered(f), ordered(d))
        for t, u, m, f, d in zip(
            frame["time"],
            frame["user_id"],
            frame["missed"],
            frame["fetched_ids"],
            frame["deferred_ids"],
        )
    ]
