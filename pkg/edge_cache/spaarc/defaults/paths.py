"""
SPAARC edge cache simulator - Association and proximity aware prefetching for
edge caches.

Provides our default paths and file layouts.

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

from typing import List

TRACE_FILENAME: str = "trace.csv"
CATALOG_FILENAME: str = "catalog.csv"
PLANTED_ITEMSETS_FILENAME: str = "planted_itemsets.txt"
SHIFTED_ITEMSETS_FILENAME: str = "shifted_itemsets.txt"
TRANSACTIONS_FILENAME: str = "transactions.spmf"
RULES_FILENAME: str = "rules.csv"
HISTORY_FILENAME: str = "history.csv"
MANIFEST_FILENAME: str = "manifest.json"
COMPARISONS_FILENAME: str = "comparisons.csv"
BEST_OVER_SWEEP_FILENAME: str = "best_over_sweep.csv"

REPORTS_DIRNAME: str = "reports"
TUNER_DIRNAME: str = "tuner"
DECISIONS_DIRNAME: str = "decisions"
DOWNLOADS_DIRNAME: str = "downloads"
COMPARISONS_DIRNAME: str = "comparisons"

TRACE_HEADER: List[str] = ["time", "user_id", "object_id", "x", "y"]
CATALOG_HEADER: List[str] = ["object_id", "size_mb", "x", "y"]
RULES_HEADER: List[str] = [
    "antecedent",
    "consequent",
    "support",
    "confidence",
    "lift",
]
REPORT_HEADER: List[str] = [
    "viewpoint",
    "hits",
    "misses",
    "hit_rate",
    "on_demand",
    "prefetches",
]
TUNER_LOG_HEADER: List[str] = [
    "viewpoint",
    "hit_rate",
    "hrd",
    "action",
    "active_min_support",
]
DECISION_LOG_HEADER: List[str] = [
    "time",
    "user_id",
    "missed",
    "fetched_ids",
    "deferred_ids",
]
COMPARISON_HEADER: List[str] = [
    "dataset",
    "users",
    "objects",
    "seed",
    "policy",
    "baseline",
    "treatment",
    "baseline_mode",
    "treatment_mode",
    "baseline_hit_rate",
    "treatment_hit_rate",
    "hit_rate_gain_pct",
    "on_demand_reduction_pct",
    "prefetch_overhead",
]

SUMMARY_MARKER: str = "summary"
ITEM_SEPARATOR: str = ";"
RULES_SEPARATOR: str = "|"
BEST_OVER_SWEEP_HEADER: List[str] = [
    "dataset",
    "users",
    "objects",
    "seed",
    "mode",
    "policy",
    "cell",
    "min_support",
    "min_confidence",
    "association_factor",
    "proximity",
    "hit_rate",
]
