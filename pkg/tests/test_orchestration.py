"""
SPAARC edge cache simulator - Association and proximity aware prefetching for
edge caches.

Tests of the experiment orchestration.

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
from dataclasses import replace

import pytest

from edge_cache.spaarc.config_manager import ConfigManager
from edge_cache.spaarc.exceptions import ConfigError, TraceFormatError
from edge_cache.spaarc.harness import RunReport
from edge_cache.spaarc.orchestration import (
    Cell,
    ExperimentSpec,
    Orchestration,
    best_over_sweep,
    read_manifest_reports,
    run_experiment,
)
from edge_cache.spaarc.storage import (
    load_ruleset,
    read_catalog,
    read_itemsets,
    read_trace,
)

SMALL = {
    "workload.n_users": 15,
    "workload.n_objects": 20,
    "workload.seed": 3,
    "experiment.seeds": [3],
}


def config_of(**overrides) -> ConfigManager:
    return ConfigManager(overrides={**SMALL, **overrides})


def report_of(hit_rate_hits: int, **labels) -> RunReport:
    labels = {
        "dataset": "DS30",
        "users": 15,
        "objects": 20,
        "seed": 3,
        "mode": "spaarc",
        "policy": "FIFO",
        "min_confidence": 0.45,
        "association_factor": 1.0,
        "proximity": 15.0,
        **labels,
    }
    labels["name"] = f"cell-{labels['min_support']}"

    return RunReport(
        mode=labels["mode"],
        policy=labels["policy"],
        hits=hit_rate_hits,
        misses=10 - hit_rate_hits,
        on_demand_fetches=10 - hit_rate_hits,
        prefetch_count=0,
        mean_latency_ms=0.0,
        labels=labels,
    )


def read_bytes(path) -> bytes:
    with open(path, "rb") as file_stream:
        return file_stream.read()


def test_cell_name() -> None:
    cell = Cell(
        dataset="DS30",
        users=100,
        objects=50,
        seed=42,
        mode="spaarc",
        policy="LRU",
        min_support=0.3,
        min_confidence=0.45,
        association_factor=1.0,
        proximity=15.0,
    )

    assert cell.name == "DS30-u100-o50-s42-spaarc-LRU-ms0.3-mc0.45-af1-px15"
    assert cell.workload_key == ("DS30", 100, 50, 42)
    assert cell.sweep_point == (0.3, 0.45, 1.0, 15.0)
    assert cell.labels()["policy"] == "LRU"


def test_cells(tmp_path) -> None:
    spec = ExperimentSpec.from_config(
        config_of(
            **{
                "experiment.policies": ["FIFO", "LRU"],
                "sweep.min_support": [0.3, 0.4],
            }
        ),
        str(tmp_path),
    )
    cells = spec.cells()

    assert len(cells) == 8
    assert [x.mode for x in cells[:2]] == ["baseline", "spaarc"]
    assert [x.min_support for x in cells[:4]] == [0.3, 0.3, 0.4, 0.4]
    assert {x.workload_key for x in cells} == {("DS30", 15, 20, 3)}
    assert len({x.name for x in cells}) == 8


def test_single(tmp_path) -> None:
    spec = ExperimentSpec.single(
        config_of(**{"sim.mode": "spaarc-tune", "cache.policy": "pop"}), str(tmp_path)
    )

    assert [(x.mode, x.policy) for x in spec.cells()] == [("spaarc-tune", "POP")]


def test_other_sources_have_no_dataset_axes(tmp_path) -> None:
    spec = ExperimentSpec.from_config(
        config_of(
            **{
                "workload.source": "trace",
                "workload.trace_file": "trace.csv",
                "workload.catalog_file": "catalog.csv",
            }
        ),
        str(tmp_path),
    )

    assert spec.datasets == ("trace",)
    assert spec.users == (0,)
    assert spec.objects == (0,)


def test_empty_axis(tmp_path) -> None:
    spec = ExperimentSpec.single(config_of(), str(tmp_path))

    with pytest.raises(ConfigError) as exception:
        replace(spec, policies=())

    assert exception.value.key == "policies"


def test_best_over_sweep() -> None:
    rows = best_over_sweep(
        [
            report_of(4, min_support=0.3),
            report_of(5, min_support=0.4),
            report_of(5, min_support=0.5),
        ]
    )

    assert len(rows) == 1
    assert rows[0]["min_support"] == 0.4
    assert rows[0]["cell"] == "cell-0.4"
    assert rows[0]["hit_rate"] == 0.5


def test_best_over_sweep_ties_go_to_lower_support() -> None:
    rows = best_over_sweep([report_of(5, min_support=0.6), report_of(5, min_support=0.2)])

    assert rows[0]["min_support"] == 0.2


def test_best_over_sweep_groups() -> None:
    rows = best_over_sweep(
        [
            report_of(5, min_support=0.3),
            report_of(6, min_support=0.3, policy="LRU"),
            report_of(7, min_support=0.3, mode="baseline"),
        ]
    )

    assert sorted(x["hit_rate"] for x in rows) == [0.5, 0.6, 0.7]


def test_single_run(tmp_path) -> None:
    result = Orchestration(config_of(), output_dir=str(tmp_path)).run_single()

    assert len(result.reports) == 1
    assert result.reports[0].labels["name"].startswith("DS30-u15-o20-s3-spaarc-FIFO")
    assert result.comparisons == []
    assert os.path.isfile(tmp_path / "manifest.json")
    assert os.path.isfile(tmp_path / "reports" / f"{result.reports[0].labels['name']}.csv")


def test_sweep(tmp_path) -> None:
    config = config_of(
        **{
            "experiment.policies": ["FIFO", "LRU", "LFU", "POP"],
            "sim.decision_log": True,
        }
    )
    result = run_experiment(ExperimentSpec.from_config(config, str(tmp_path)))

    assert len(result.reports) == 8
    assert len(result.comparisons) == 4
    assert {x["policy"] for x in result.comparisons} == {"FIFO", "LRU", "LFU", "POP"}
    assert all(x["baseline_mode"] == "baseline" for x in result.comparisons)
    assert len(result.best) == 8

    with open(tmp_path / "comparisons.csv", encoding="utf-8") as file_stream:
        assert len(file_stream.read().splitlines()) == 5

    pairs = sorted(os.listdir(tmp_path / "comparisons"))

    assert pairs == sorted(
        f"{x['treatment']}__vs__{x['baseline']}.csv" for x in result.comparisons
    )

    with open(tmp_path / "comparisons" / pairs[0], encoding="utf-8") as file_stream:
        assert len(file_stream.read().splitlines()) == 2

    assert all(
        x.prefetch_overhead_ratio is not None
        for x in result.reports
        if x.mode == "spaarc"
    )
    assert os.listdir(tmp_path / "decisions")


def test_baselines_are_shared_across_sweep_points(tmp_path) -> None:
    config = config_of(**{"sweep.min_support": [0.3, 0.5]})
    result = run_experiment(ExperimentSpec.from_config(config, str(tmp_path)))

    baselines = [x for x in result.reports if x.mode == "baseline"]

    assert len(baselines) == 2
    assert baselines[0].hits == baselines[1].hits
    assert baselines[0].labels["min_support"] != baselines[1].labels["min_support"]
    assert len(result.comparisons) == 2


def test_reruns_are_identical(tmp_path) -> None:
    config = config_of(**{"experiment.modes": ["baseline", "spaarc", "spaarc-tune"]})

    first = run_experiment(ExperimentSpec.from_config(config, str(tmp_path / "a")))
    second = run_experiment(ExperimentSpec.from_config(config, str(tmp_path / "b")))

    assert len(first.artifacts) == len(second.artifacts)

    for left, right in zip(first.artifacts, second.artifacts):
        assert os.path.relpath(left, tmp_path / "a") == os.path.relpath(right, tmp_path / "b")
        assert read_bytes(left) == read_bytes(right)


def test_compare(tmp_path) -> None:
    config = config_of()
    run_experiment(ExperimentSpec.from_config(config, str(tmp_path)))

    expected = read_bytes(tmp_path / "comparisons.csv")
    os.remove(tmp_path / "comparisons.csv")

    Orchestration(config, output_dir=str(tmp_path), action="compare")

    assert read_bytes(tmp_path / "comparisons.csv") == expected
    assert len(read_manifest_reports(str(tmp_path))) == 2


def test_compare_needs_manifest(tmp_path) -> None:
    with pytest.raises(ConfigError) as exception:
        Orchestration(config_of(), output_dir=str(tmp_path), action="compare")

    assert exception.value.key == "--out"


def test_generate(tmp_path) -> None:
    artifacts = Orchestration(config_of(), output_dir=str(tmp_path)).run_generate()
    destination = tmp_path / "DS30-u15-o20-s3"

    assert str(destination / "trace.csv") in artifacts

    catalog = read_catalog(str(destination / "catalog.csv"))
    trace = read_trace(str(destination / "trace.csv"))

    assert len(catalog) == 20
    assert {x.user_id for x in trace} <= set(range(15))
    assert all(x.object_id in catalog for x in trace)
    assert read_itemsets(str(destination / "planted_itemsets.txt"))

    history = read_trace(str(destination / "history.csv"))
    rules = load_ruleset(
        str(destination / "rules.csv"), min_support=0.3, min_confidence=0.45
    )

    assert len({x.user_id for x in history}) == 100
    assert min(x.user_id for x in history) >= 15
    assert str(destination / "rules.csv") in artifacts
    assert all(x.confidence >= 0.45 for x in rules)


def test_trace_source(tmp_path) -> None:
    Orchestration(config_of(), output_dir=str(tmp_path / "generated")).run_generate()
    destination = tmp_path / "generated" / "DS30-u15-o20-s3"

    generated = run_experiment(
        ExperimentSpec.from_config(config_of(), str(tmp_path / "a"))
    )
    replayed = run_experiment(
        ExperimentSpec.from_config(
            config_of(
                **{
                    "workload.source": "trace",
                    "workload.trace_file": str(destination / "trace.csv"),
                    "workload.catalog_file": str(destination / "catalog.csv"),
                    "workload.history_file": str(destination / "history.csv"),
                }
            ),
            str(tmp_path / "b"),
        )
    )

    assert [x.hit_rate for x in generated.reports] == [
        x.hit_rate for x in replayed.reports
    ]
    assert replayed.reports[0].labels["dataset"] == "trace"


def test_spmf_source(tmp_path) -> None:
    spmf_file = tmp_path / "transactions.spmf"
    spmf_file.write_text("@CONVERTED_FROM_TEXT\n1 2 3\n2 3\n1 2 3 4\n3 4\n1 2\n")

    result = run_experiment(
        ExperimentSpec.from_config(
            config_of(
                **{
                    "workload.source": "spmf",
                    "workload.spmf_file": str(spmf_file),
                    "cache.capacity_fraction": 0.5,
                }
            ),
            str(tmp_path / "out"),
        )
    )

    # The first two of the five baskets are kept as history.
    assert len(result.reports) == 2
    assert all(x.lookups == 8 for x in result.reports)


def test_empty_spmf_file(tmp_path) -> None:
    spmf_file = tmp_path / "transactions.spmf"
    spmf_file.write_text("@CONVERTED_FROM_TEXT\n")

    config = config_of(**{"workload.source": "spmf", "workload.spmf_file": str(spmf_file)})

    with pytest.raises(TraceFormatError) as exception:
        Orchestration(config, output_dir=str(tmp_path / "out"), action="run")

    assert exception.value.key == "workload.spmf_file"


def test_trace_source_without_history_file(tmp_path) -> None:
    Orchestration(config_of(), output_dir=str(tmp_path / "generated")).run_generate()
    destination = tmp_path / "generated" / "DS30-u15-o20-s3"
    trace = read_trace(str(destination / "trace.csv"))

    result = run_experiment(
        ExperimentSpec.from_config(
            config_of(
                **{
                    "workload.source": "trace",
                    "workload.trace_file": str(destination / "trace.csv"),
                    "workload.catalog_file": str(destination / "catalog.csv"),
                    "workload.history_sessions": 5,
                }
            ),
            str(tmp_path / "out"),
        )
    )
    starts = {}

    for event in trace:
        starts.setdefault(event.user_id, event.time)

    first_users = list(starts)[:5]
    kept = [x for x in trace if x.user_id not in first_users]

    assert all(x.lookups == len(kept) for x in result.reports)
