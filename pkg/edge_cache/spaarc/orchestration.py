"""
SPAARC edge cache simulator - Association and proximity aware prefetching for
edge caches.

Provides the orchestration of our experiments.

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
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

from PyFunceble.helpers.dict import DictHelper
from PyFunceble.helpers.file import FileHelper
from PyFunceble.helpers.hash import HashHelper

import edge_cache.spaarc.defaults.paths
from edge_cache.spaarc.__about__ import __version__
from edge_cache.spaarc.arm import RuleSet, build_ruleset
from edge_cache.spaarc.config_manager import ConfigManager
from edge_cache.spaarc.domain import AccessEvent, Catalog, sessionize, split_history
from edge_cache.spaarc.exceptions import ConfigError, TraceFormatError
from edge_cache.spaarc.harness import Fingerprint, RunConfig, RunReport, compare, run
from edge_cache.spaarc.storage import (
    dump_ruleset,
    read_catalog,
    read_report_summary,
    read_trace,
    write_catalog,
    write_decision_log,
    write_itemsets,
    write_report,
    write_rows,
    write_trace,
    write_tuner_log,
)
from edge_cache.spaarc.workload.config import GeneratedWorkload
from edge_cache.spaarc.workload.environment import generate_environment
from edge_cache.spaarc.workload.generator import generate_trace
from edge_cache.spaarc.workload.spmf import load_spmf, spmf_to_trace, write_spmf

paths = edge_cache.spaarc.defaults.paths

SWEEP_LABELS: Tuple[str, ...] = (
    "min_support",
    "min_confidence",
    "association_factor",
    "proximity",
)


def _label(value: float) -> str:
    return format(value, "g")


@dataclass(frozen=True)
class Cell:
    """
    Describes one run of an experiment.
    """

    dataset: str
    users: int
    objects: int
    seed: int
    mode: str
    policy: str
    min_support: float
    min_confidence: float
    association_factor: float
    proximity: float

    @property
    def workload_key(self) -> Tuple[str, int, int, int]:
        """
        Provides what identifies the workload of the cell.
        """

        return self.dataset, self.users, self.objects, self.seed

    @property
    def sweep_point(self) -> Tuple[float, ...]:
        """
        Provides the position of the cell on the sweep axes.
        """

        return tuple(getattr(self, x) for x in SWEEP_LABELS)

    @property
    def name(self) -> str:
        """
        Provides the file-safe name of the cell.
        """

        return (
            f"{self.dataset}-u{self.users}-o{self.objects}-s{self.seed}-"
            f"{self.mode}-{self.policy}-ms{_label(self.min_support)}-"
            f"mc{_label(self.min_confidence)}-af{_label(self.association_factor)}-"
            f"px{_label(self.proximity)}"
        )

    def labels(self) -> Dict[str, Any]:
        """
        Provides the cell as a dictionary.
        """

        return asdict(self)


@dataclass(frozen=True)
class ExperimentSpec:
    """
    Describes the matrix of runs of an experiment.
    """

    name: str
    source: str
    output_dir: str
    modes: Tuple[str, ...]
    policies: Tuple[str, ...]
    seeds: Tuple[int, ...]
    datasets: Tuple[str, ...]
    users: Tuple[int, ...]
    objects: Tuple[int, ...]
    min_supports: Tuple[float, ...]
    min_confidences: Tuple[float, ...]
    association_factors: Tuple[float, ...]
    proximities: Tuple[float, ...]
    max_workers: int = 1
    config: ConfigManager = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        for key in (
            "modes",
            "policies",
            "seeds",
            "datasets",
            "users",
            "objects",
            "min_supports",
            "min_confidences",
            "association_factors",
            "proximities",
        ):
            if not getattr(self, key):
                raise ConfigError(f"The {key} axis of the experiment is empty.", key=key)

            object.__setattr__(self, key, tuple(getattr(self, key)))

    @classmethod
    def from_config(cls, config: ConfigManager, output_dir: str) -> "ExperimentSpec":
        """
        Provides the full sweep described by the given configuration.
        """

        source = config["workload.source"]

        if source == "generate":
            datasets = config.sweep_axis("sweep.datasets", config["workload.dataset"])
            users = config.sweep_axis("sweep.users", config["workload.n_users"])
            objects = config.sweep_axis("sweep.objects", config["workload.n_objects"])
        else:
            datasets, users, objects = [source], [0], [0]

        return cls(
            name=config["experiment.name"],
            source=source,
            output_dir=output_dir,
            modes=config["experiment.modes"],
            policies=config["experiment.policies"],
            seeds=config["experiment.seeds"],
            datasets=datasets,
            users=users,
            objects=objects,
            min_supports=config.sweep_axis("sweep.min_support", config["rules.min_support"]),
            min_confidences=config.sweep_axis(
                "sweep.min_confidence", config["rules.min_confidence"]
            ),
            association_factors=config.sweep_axis(
                "sweep.association_factor", config["spaarc.association_factor_threshold"]
            ),
            proximities=config.sweep_axis(
                "sweep.proximity", config["spaarc.proximity_threshold"]
            ),
            max_workers=config["experiment.max_workers"],
            config=config,
        )

    @classmethod
    def single(cls, config: ConfigManager, output_dir: str) -> "ExperimentSpec":
        """
        Provides the single run described by the given configuration.
        """

        source = config["workload.source"]
        generated = source == "generate"

        return cls(
            name=config["experiment.name"],
            source=source,
            output_dir=output_dir,
            modes=[config["sim.mode"]],
            policies=[config["cache.policy"]],
            seeds=[config["workload.seed"]],
            datasets=[config["workload.dataset"] if generated else source],
            users=[config["workload.n_users"] if generated else 0],
            objects=[config["workload.n_objects"] if generated else 0],
            min_supports=[config["rules.min_support"]],
            min_confidences=[config["rules.min_confidence"]],
            association_factors=[config["spaarc.association_factor_threshold"]],
            proximities=[config["spaarc.proximity_threshold"]],
            max_workers=1,
            config=config,
        )

    def cells(self) -> List[Cell]:
        """
        Provides the cells, grouped by workload.
        """

        return [
            Cell(
                dataset=dataset,
                users=users,
                objects=objects,
                seed=seed,
                policy=policy,
                min_support=min_support,
                min_confidence=min_confidence,
                association_factor=association_factor,
                proximity=proximity,
                mode=mode,
            )
            for (
                dataset,
                users,
                objects,
                seed,
                policy,
                min_support,
                min_confidence,
                association_factor,
                proximity,
                mode,
            ) in itertools.product(
                self.datasets,
                self.users,
                self.objects,
                self.seeds,
                self.policies,
                self.min_supports,
                self.min_confidences,
                self.association_factors,
                self.proximities,
                self.modes,
            )
        ]


@dataclass
class ExperimentResult:
    """
    Describes the outcome of an experiment.
    """

    reports: List[RunReport] = field(default_factory=list)
    comparisons: List[Dict[str, Any]] = field(default_factory=list)
    best: List[Dict[str, Any]] = field(default_factory=list)
    artifacts: List[str] = field(default_factory=list)


def with_history(
    config: ConfigManager, workload: GeneratedWorkload
) -> GeneratedWorkload:
    """
    Provides the history the rules are mined from: the given history file, or
    else the first sessions of the read trace.
    """

    if config["workload.history_file"]:
        return replace(
            workload, history=tuple(read_trace(config["workload.history_file"]))
        )

    history, trace = split_history(
        workload.trace, config["sim.session_gap"], config["workload.history_sessions"]
    )

    logging.info(
        "Kept %d events as history, %d events are replayed.", len(history), len(trace)
    )

    return replace(workload, trace=tuple(trace), history=tuple(history))


def load_workload(
    config: ConfigManager,
    cell: Cell,
    download_dir: Optional[str] = None,
) -> GeneratedWorkload:
    """
    Provides the workload of the given cell.
    """

    source = config["workload.source"]

    if source == "trace":
        return with_history(
            config,
            GeneratedWorkload(
                catalog=read_catalog(config["workload.catalog_file"]),
                trace=tuple(read_trace(config["workload.trace_file"])),
            ),
        )

    if source == "spmf":
        transactions = load_spmf(
            config["workload.spmf_file"],
            download_dir=download_dir,
            limit=config["workload.spmf_limit"],
        )

        if not transactions:
            raise TraceFormatError(
                "The SPMF file holds no transaction.", key="workload.spmf_file"
            )

        return with_history(
            config,
            spmf_to_trace(transactions, config.workload_config(seed=cell.seed)),
        )

    # An explicit planted support only holds outside of a dataset sweep.
    workload_config = config.workload_config(
        seed=cell.seed,
        dataset=cell.dataset if config["sweep.datasets"] else None,
        users=cell.users,
        objects=cell.objects,
    )

    return generate_trace(workload_config, generate_environment(workload_config))


def execute_cell(
    catalog: Catalog,
    trace: Sequence[AccessEvent],
    run_config: RunConfig,
    history: Sequence[AccessEvent] = (),
) -> RunReport:
    """
    Runs a cell. Kept at module level so that it can be sent to a worker.
    """

    return run(trace, catalog, run_config, history=history)


def _run_configs(
    config: ConfigManager, cells: Sequence[Cell], catalog: Catalog
) -> List[RunConfig]:
    return [
        config.run_config(
            catalog,
            mode=x.mode,
            policy=x.policy,
            seed=x.seed,
            min_support=x.min_support,
            min_confidence=x.min_confidence,
            association_factor=x.association_factor,
            proximity=x.proximity,
        )
        for x in cells
    ]


def _execute(
    workload: GeneratedWorkload, run_configs: Sequence[RunConfig], max_workers: int
) -> List[RunReport]:
    # Baseline runs don't depend on the sweep point.
    unique: Dict[Any, int] = {}
    tasks: List[RunConfig] = []
    slots = []

    for run_config in run_configs:
        key = run_config

        if not run_config.mode.prefetching:
            key = (run_config.mode, run_config.cache, run_config.latency, run_config.seed)

        if key not in unique:
            unique[key] = len(tasks)
            tasks.append(run_config)

        slots.append(unique[key])

    if max_workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as executor:
            reports = list(
                executor.map(
                    execute_cell,
                    itertools.repeat(workload.catalog),
                    itertools.repeat(workload.trace),
                    tasks,
                    itertools.repeat(workload.history),
                )
            )
    else:
        reports = [
            execute_cell(workload.catalog, workload.trace, x, workload.history)
            for x in tasks
        ]

    return [reports[x] for x in slots]


def best_over_sweep(reports: Sequence[RunReport]) -> List[Dict[str, Any]]:
    """
    Provides, for each workload, mode and policy, the sweep point with the
    highest hit rate. Ties go to the lower minimum support.
    """

    groups: Dict[Tuple, List[RunReport]] = {}

    for report in reports:
        labels = report.labels
        key = (
            labels.get("dataset"),
            labels.get("users"),
            labels.get("objects"),
            labels.get("seed"),
            labels.get("mode", report.mode),
            labels.get("policy", report.policy),
        )
        groups.setdefault(key, []).append(report)

    rows = []

    for (dataset, users, objects, seed, mode, policy), members in groups.items():
        best = members[0]

        for candidate in members[1:]:
            if candidate.hit_rate > best.hit_rate or (
                candidate.hit_rate == best.hit_rate
                and candidate.labels.get("min_support", 0) < best.labels.get("min_support", 0)
            ):
                best = candidate

        row = {
            "dataset": dataset,
            "users": users,
            "objects": objects,
            "seed": seed,
            "mode": mode,
            "policy": policy,
            "cell": best.labels.get("name"),
            "hit_rate": best.hit_rate,
        }
        row.update({x: best.labels.get(x) for x in SWEEP_LABELS})
        rows.append(row)

    return rows


def comparison_rows(reports: Sequence[RunReport]) -> List[Dict[str, Any]]:
    """
    Compares every prefetching report to the baseline report of the same
    workload, policy and sweep point.
    """

    baselines = {}

    for report in reports:
        if report.mode == "baseline":
            baselines[_comparison_key(report)] = report

    rows = []

    for report in reports:
        baseline = baselines.get(_comparison_key(report))

        if report.mode == "baseline" or baseline is None:
            continue

        comparison = compare(baseline, report)
        report.prefetch_overhead_ratio = comparison.prefetch_overhead

        rows.append(
            {
                "dataset": report.labels.get("dataset"),
                "users": report.labels.get("users"),
                "objects": report.labels.get("objects"),
                "seed": report.labels.get("seed"),
                "policy": report.policy,
                "baseline": baseline.labels.get("name"),
                "treatment": report.labels.get("name"),
                "baseline_mode": baseline.mode,
                "treatment_mode": report.mode,
                "baseline_hit_rate": baseline.hit_rate,
                "treatment_hit_rate": report.hit_rate,
                "hit_rate_gain_pct": comparison.hit_rate_gain_pct,
                "on_demand_reduction_pct": comparison.on_demand_reduction_pct,
                "prefetch_overhead": comparison.prefetch_overhead,
            }
        )

    return rows


def _comparison_key(report: RunReport) -> Tuple:
    labels = report.labels

    return (
        labels.get("dataset"),
        labels.get("users"),
        labels.get("objects"),
        labels.get("seed"),
        report.policy,
    ) + tuple(labels.get(x) for x in SWEEP_LABELS)


def write_summaries(
    reports: Sequence[RunReport], output_dir: str
) -> Tuple[List[Dict[str, Any]], List[Dict[str, Any]], List[str]]:
    """
    Writes the comparison and best-over-sweep tables of the given reports.
    """

    comparisons = comparison_rows(reports)
    best = best_over_sweep(reports)

    artifacts = [
        write_rows(
            comparisons,
            paths.COMPARISON_HEADER,
            os.path.join(output_dir, paths.COMPARISONS_FILENAME),
        ),
        write_rows(
            best,
            paths.BEST_OVER_SWEEP_HEADER,
            os.path.join(output_dir, paths.BEST_OVER_SWEEP_FILENAME),
        ),
    ]

    # One file per (baseline, treatment) pair next to the full table.
    for row in comparisons:
        artifacts.append(
            write_rows(
                [row],
                paths.COMPARISON_HEADER,
                os.path.join(
                    output_dir,
                    paths.COMPARISONS_DIRNAME,
                    f"{row['treatment']}__vs__{row['baseline']}.csv",
                ),
            )
        )

    return comparisons, best, artifacts


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """
    Runs every cell of the given experiment and writes its artifacts.
    """

    config = spec.config or ConfigManager()
    cells = spec.cells()
    result = ExperimentResult()
    entries = []

    os.makedirs(spec.output_dir, exist_ok=True)

    for workload_key, group in itertools.groupby(cells, key=lambda x: x.workload_key):
        group = list(group)

        logging.info("Preparing the workload %r (%d cells).", workload_key, len(group))

        workload = load_workload(
            config,
            group[0],
            download_dir=os.path.join(spec.output_dir, paths.DOWNLOADS_DIRNAME),
        )
        reports = _execute(
            workload, _run_configs(config, group, workload.catalog), spec.max_workers
        )

        for cell, report in zip(group, reports):
            report = replace(report, labels={**cell.labels(), "name": cell.name})
            result.reports.append(report)
            entries.append(_write_cell(spec.output_dir, cell, report, result.artifacts))

            logging.info("Finished %s: hit rate %.4f.", cell.name, report.hit_rate)

    result.comparisons, result.best, artifacts = write_summaries(
        result.reports, spec.output_dir
    )
    result.artifacts.extend(artifacts)
    result.artifacts.append(write_manifest(spec, config, entries))

    return result


def _write_cell(
    output_dir: str, cell: Cell, report: RunReport, artifacts: List[str]
) -> Dict[str, Any]:
    report_file = os.path.join(paths.REPORTS_DIRNAME, f"{cell.name}.csv")
    write_report(report, os.path.join(output_dir, report_file))
    artifacts.append(os.path.join(output_dir, report_file))

    entry = {
        "name": cell.name,
        "labels": cell.labels(),
        "mode": report.mode,
        "policy": report.policy,
        "report": report_file,
        "report_digest": HashHelper().hash_file(os.path.join(output_dir, report_file)),
        "mean_latency_ms": report.mean_latency_ms,
        "coalesced_misses": report.coalesced_misses,
        "fingerprint": report.fingerprint.as_dict(),
        "tuner_log": None,
        "decisions": None,
    }

    if report.tuner_log:
        entry["tuner_log"] = os.path.join(paths.TUNER_DIRNAME, f"{cell.name}.csv")
        artifacts.append(
            write_tuner_log(report.tuner_log, os.path.join(output_dir, entry["tuner_log"]))
        )

    if report.decision_log:
        entry["decisions"] = os.path.join(paths.DECISIONS_DIRNAME, f"{cell.name}.csv")
        artifacts.append(
            write_decision_log(
                report.decision_log, os.path.join(output_dir, entry["decisions"])
            )
        )

    return entry


def write_manifest(
    spec: ExperimentSpec, config: ConfigManager, entries: List[Dict[str, Any]]
) -> str:
    """
    Writes what is needed to reproduce the experiment.
    """

    destination = os.path.join(spec.output_dir, paths.MANIFEST_FILENAME)

    DictHelper(
        {
            "name": spec.name,
            "version": __version__,
            "config_digest": config.digest(),
            "config": config.as_dict(),
            "seeds": list(spec.seeds),
            "cells": entries,
        }
    ).to_json_file(destination)

    return destination


def read_manifest_reports(output_dir: str) -> List[RunReport]:
    """
    Rebuilds the summaries of the reports listed in the manifest of the given
    directory.
    """

    manifest_file = FileHelper(os.path.join(output_dir, paths.MANIFEST_FILENAME))

    if not manifest_file.exists():
        raise ConfigError(f"No manifest in {output_dir!r}.", key="--out")

    reports = []

    for entry in DictHelper().from_json_file(manifest_file.path)["cells"]:
        summary = read_report_summary(os.path.join(output_dir, entry["report"]))

        reports.append(
            RunReport(
                mode=entry["mode"],
                policy=entry["policy"],
                hits=summary["hits"],
                misses=summary["misses"],
                on_demand_fetches=summary["on_demand"],
                prefetch_count=summary["prefetches"],
                mean_latency_ms=entry["mean_latency_ms"],
                fingerprint=Fingerprint(**entry["fingerprint"]),
                coalesced_misses=entry["coalesced_misses"],
                labels={**entry["labels"], "name": entry["name"]},
            )
        )

    return reports


class Orchestration:
    """
    Orchestrates the subcommands.

    :param config:
        The configuration to work with.
    :param output_dir:
        Where our artifacts are written.
    :param action:
        The subcommand to start right away: :code:`generate`, :code:`run`,
        :code:`sweep` or :code:`compare`.
    """

    def __init__(
        self,
        config: ConfigManager,
        *,
        output_dir: str,
        action: Optional[str] = None,
    ) -> None:
        self.config = config
        self.output_dir = output_dir

        logging.info("Output directory: %r", self.output_dir)
        logging.info("Configuration digest: %s", self.config.digest())

        actions = {
            "generate": self.run_generate,
            "run": self.run_single,
            "sweep": self.run_sweep,
            "compare": self.run_compare,
        }

        if action is not None:
            actions[action]()

    def run_generate(self) -> List[str]:
        """
        Writes the workload files of every seed.
        """

        spec = ExperimentSpec.from_config(self.config, self.output_dir)
        workloads = {}
        artifacts = []

        for cell in spec.cells():
            workloads.setdefault(cell.workload_key, cell)

        for workload_key, cell in workloads.items():
            dataset, users, objects, seed = workload_key
            destination = os.path.join(
                self.output_dir, f"{dataset}-u{users}-o{objects}-s{seed}"
            )

            workload = load_workload(
                self.config,
                cell,
                download_dir=os.path.join(self.output_dir, paths.DOWNLOADS_DIRNAME),
            )

            artifacts.append(
                write_trace(workload.trace, os.path.join(destination, paths.TRACE_FILENAME))
            )
            artifacts.append(
                write_catalog(
                    workload.catalog, os.path.join(destination, paths.CATALOG_FILENAME)
                )
            )

            if workload.history:
                artifacts.append(
                    write_trace(
                        workload.history,
                        os.path.join(destination, paths.HISTORY_FILENAME),
                    )
                )
                artifacts.append(
                    dump_ruleset(
                        self.mine_history(workload.history),
                        os.path.join(destination, paths.RULES_FILENAME),
                    )
                )

            artifacts.append(
                write_itemsets(
                    workload.planted_itemsets,
                    os.path.join(destination, paths.PLANTED_ITEMSETS_FILENAME),
                )
            )

            if workload.shifted_itemsets:
                artifacts.append(
                    write_itemsets(
                        workload.shifted_itemsets,
                        os.path.join(destination, paths.SHIFTED_ITEMSETS_FILENAME),
                    )
                )

            if self.config["workload.source"] == "spmf":
                artifacts.append(
                    write_spmf(
                        sessionize(workload.trace, self.config["sim.session_gap"]),
                        os.path.join(destination, paths.TRANSACTIONS_FILENAME),
                    )
                )

            logging.info("Wrote the workload of %r into %r.", workload_key, destination)

        return artifacts

    def mine_history(self, history: Sequence[AccessEvent]) -> RuleSet:
        """
        Mines the static rules a run would start with out of the given history.
        """

        training = sessionize(history, self.config["sim.session_gap"])[
            : self.config["rules.training_transactions"]
        ]

        return build_ruleset(
            training,
            self.config["rules.min_support"],
            self.config["rules.min_confidence"],
            max_len=self.config["rules.max_itemset_size"],
            algorithm=self.config["rules.algorithm"],
        )

    def run_single(self) -> ExperimentResult:
        """
        Runs the single cell described by the configuration.
        """

        return run_experiment(ExperimentSpec.single(self.config, self.output_dir))

    def run_sweep(self) -> ExperimentResult:
        """
        Runs the full experiment matrix.
        """

        return run_experiment(ExperimentSpec.from_config(self.config, self.output_dir))

    def run_compare(self) -> List[str]:
        """
        Recomputes the comparison tables of a previous sweep.
        """

        _, _, artifacts = write_summaries(
            read_manifest_reports(self.output_dir), self.output_dir
        )

        return artifacts
