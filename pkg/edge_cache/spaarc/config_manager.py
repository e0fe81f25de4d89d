"""
SPAARC edge cache simulator - Association and proximity aware prefetching for
edge caches.

Provides the interface for the management of the experiment configuration.

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

import contextlib
import copy
import json
import logging
import os
import re
from typing import Any, Dict, Iterator, List, Mapping, Optional

from PyFunceble.helpers.dict import DictHelper
from PyFunceble.helpers.file import FileHelper
from PyFunceble.helpers.hash import HashHelper
from PyFunceble.helpers.merge import Merge

import edge_cache.spaarc.defaults.markers
import edge_cache.spaarc.defaults.simulation
from edge_cache.spaarc.cache import CacheConfig
from edge_cache.spaarc.domain import Catalog
from edge_cache.spaarc.exceptions import ConfigError, ParameterError
from edge_cache.spaarc.harness import LatencyModel, Mode, RunConfig
from edge_cache.spaarc.policy.all import POLICIES
from edge_cache.spaarc.prefetcher import SpaarcParams
from edge_cache.spaarc.tuner import TunerConfig
from edge_cache.spaarc.workload.config import Rect, WorkloadConfig

YAML_EXTENSIONS: tuple = (".yaml", ".yml")


@contextlib.contextmanager
def _reported_as(section: str, renames: Optional[Mapping[str, str]] = None) -> Iterator[None]:
    """
    Turns the parameter errors raised while building a config object into
    configuration errors naming the offending key.
    """

    try:
        yield
    except ParameterError as exception:
        renames = renames or {}
        key = renames.get(exception.key, f"{section}.{exception.key}")

        raise ConfigError(str(exception), key=key) from exception


class ConfigManager:
    """
    Provides an interface for the management of the experiment configuration.

    The configuration is a flat dictionary of dotted keys. Whatever we are
    given is merged over our defaults.

    :param config_file:
        The file to read. :code:`.yaml` and :code:`.yml` files are read as
        YAML, everything else with our :code:`key = value` grammar.
    :param overrides:
        Flat values which take precedence over the file.

    :raise ConfigError:
        When the configuration is unreadable or invalid.
    """

    def __init__(
        self,
        config_file: Optional[str] = None,
        *,
        overrides: Optional[Mapping[str, Any]] = None,
    ) -> None:
        self.config_file = config_file
        self.content: Dict[str, Any] = copy.deepcopy(
            edge_cache.spaarc.defaults.simulation.CONFIGURATION
        )

        if config_file:
            self.merge(self.load(config_file))

        if overrides:
            self.merge(overrides)

        self.update()

        logging.debug("Configuration:\n%r", self.content)

    def __getitem__(self, index: str) -> Any:
        if index in self.content:
            return self.content[index]

        raise ConfigError(f"Unknown configuration key {index!r}.", key=index)

    def __setitem__(self, index: str, value: Any) -> None:
        self.content[index] = value
        self.update()

    def __contains__(self, index: str) -> bool:
        return index in self.content

    @staticmethod
    def parse_scalar(raw: str) -> Any:
        """
        Parses a scalar of our grammar.
        """

        markers = edge_cache.spaarc.defaults.markers
        value = raw.strip()
        lowered = value.lower()

        if lowered in markers.NONE_MARKERS:
            return None

        if lowered in markers.TRUE_MARKERS:
            return True

        if lowered in markers.FALSE_MARKERS:
            return False

        for kind in (int, float):
            try:
                return kind(value)
            except ValueError:
                pass

        return value

    @classmethod
    def parse_value(cls, raw: str) -> Any:
        """
        Parses the value of a :code:`key = value` line.
        """

        markers = edge_cache.spaarc.defaults.markers
        value = raw.strip()

        if value == markers.EMPTY_LIST_MARKER:
            return []

        if markers.LIST_SEPARATOR in value:
            return [cls.parse_scalar(x) for x in value.split(markers.LIST_SEPARATOR)]

        return cls.parse_scalar(value)

    @classmethod
    def parse_flat(cls, text: str) -> Dict[str, Any]:
        """
        Parses a configuration written with our :code:`key = value` grammar.

        :raise ConfigError:
            When a line is neither blank, a comment nor a pair.
        """

        markers = edge_cache.spaarc.defaults.markers
        result = {}

        for line_number, line in enumerate(text.splitlines(), start=1):
            if re.match(markers.IGNORABLE_LINE_REGEX, line):
                continue

            matched = re.match(markers.PAIR_LINE_REGEX, line)

            if not matched:
                raise ConfigError(
                    f"Line {line_number} is not a 'key = value' pair: {line!r}.",
                    key=f"line:{line_number}",
                )

            result[matched.group("key")] = cls.parse_value(matched.group("value"))

        return result

    def load(self, path: str) -> Dict[str, Any]:
        """
        Reads the given configuration file.
        """

        file_helper = FileHelper(path)

        if not file_helper.exists():
            raise ConfigError(f"Configuration file {path!r} not found.", key="--config")

        if os.path.splitext(path)[1].lower() in YAML_EXTENSIONS:
            try:
                data = DictHelper().from_yaml_file(file_helper.path)
            except Exception as exception:  # pylint: disable=broad-except
                raise ConfigError(
                    f"Unreadable YAML file {path!r}: {exception}", key="--config"
                ) from exception

            if not data:
                return {}

            if not isinstance(data, dict):
                raise ConfigError(f"{path!r} does not hold a mapping.", key="--config")

            return DictHelper(data).flatten()

        return self.parse_flat(file_helper.read())

    def merge(self, data: Mapping[str, Any]) -> "ConfigManager":
        """
        Merges the given flat values over the current ones.
        """

        self.content = Merge(dict(data)).into(self.content, strict=True)

        return self

    @staticmethod
    def coerce(key: str, kind: str, value: Any) -> Any:
        """
        Converts the given value into the given kind.

        :raise ConfigError:
            When the value can't be converted.
        """

        def fail() -> ConfigError:
            return ConfigError(f"{key} expects a {kind} value, got {value!r}.", key=key)

        if kind.startswith("optional["):
            if value is None:
                return None

            return ConfigManager.coerce(key, kind[len("optional[") : -1], value)

        if kind.startswith("list["):
            if value is None:
                raise fail()

            values = value if isinstance(value, (list, tuple)) else [value]

            return [ConfigManager.coerce(key, kind[len("list[") : -1], x) for x in values]

        if value is None or isinstance(value, (list, dict)):
            raise fail()

        if kind == "str":
            if isinstance(value, bool):
                raise fail()

            return str(value)

        if kind == "bool":
            if not isinstance(value, bool):
                raise fail()

            return value

        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise fail()

        if kind == "int":
            if isinstance(value, float) and not value.is_integer():
                raise fail()

            return int(value)

        return float(value)

    def update(self) -> "ConfigManager":
        """
        Validates and normalizes the current content.

        :raise ConfigError:
            When a key is unknown or a value is invalid.
        """

        schema = edge_cache.spaarc.defaults.simulation.SCHEMA

        for key in sorted(self.content):
            if key not in schema:
                raise ConfigError(f"Unknown configuration key {key!r}.", key=key)

            self.content[key] = self.coerce(key, schema[key], self.content[key])

        self._check_names()
        self._check_ranges()

        return self

    def _check_names(self) -> None:
        simulation = edge_cache.spaarc.defaults.simulation
        content = self.content

        self.content["cache.policy"] = content["cache.policy"].upper()
        self.content["experiment.policies"] = [
            x.upper() for x in content["experiment.policies"]
        ]

        choices = (
            ("workload.source", [content["workload.source"]], simulation.WORKLOAD_SOURCES),
            ("workload.dataset", [content["workload.dataset"]], simulation.DATASETS),
            ("sweep.datasets", content["sweep.datasets"], simulation.DATASETS),
            ("cache.policy", [content["cache.policy"]], POLICIES),
            ("experiment.policies", content["experiment.policies"], POLICIES),
            ("sim.mode", [content["sim.mode"]], simulation.MODES),
            ("experiment.modes", content["experiment.modes"], simulation.MODES),
            ("rules.algorithm", [content["rules.algorithm"]], simulation.ARM_ALGORITHMS),
            ("spaarc.window_scope", [content["spaarc.window_scope"]], simulation.WINDOW_SCOPES),
            (
                "tuner.hit_rate_scope",
                [content["tuner.hit_rate_scope"]],
                simulation.HIT_RATE_SCOPES,
            ),
        )

        for key, values, allowed in choices:
            for value in values:
                if value not in allowed:
                    raise ConfigError(
                        f"Invalid {key} {value!r}, expected one of "
                        f"{', '.join(allowed)}.",
                        key=key,
                    )

    def _check_ranges(self) -> None:
        content = self.content

        for key in ("experiment.modes", "experiment.policies", "experiment.seeds"):
            if not content[key]:
                raise ConfigError(f"{key} can't be empty.", key=key)

        if content["experiment.max_workers"] < 1:
            raise ConfigError(
                "experiment.max_workers must be positive.", key="experiment.max_workers"
            )

        if not content["sim.cloud_rtt_ms"] > content["sim.edge_hit_ms"]:
            raise ConfigError(
                "sim.cloud_rtt_ms must be greater than sim.edge_hit_ms.",
                key="sim.cloud_rtt_ms",
            )

        if not content["workload.max_access_gap"] < content["sim.session_gap"]:
            raise ConfigError(
                "workload.max_access_gap must be smaller than sim.session_gap.",
                key="workload.max_access_gap",
            )

        if content["workload.history_sessions"] < 0:
            raise ConfigError(
                "workload.history_sessions can't be negative.",
                key="workload.history_sessions",
            )

        if content["workload.source"] == "trace":
            for key in ("workload.trace_file", "workload.catalog_file"):
                if not content[key]:
                    raise ConfigError(f"{key} is required by the trace source.", key=key)

        if content["workload.source"] == "spmf" and not content["workload.spmf_file"]:
            raise ConfigError(
                "workload.spmf_file is required by the spmf source.",
                key="workload.spmf_file",
            )

        for key in ("sweep.min_support", "sweep.min_confidence"):
            for value in content[key]:
                if not 0 < value <= 1:
                    raise ConfigError(f"{key} values must be in (0, 1].", key=key)

        for key in ("sweep.users", "sweep.objects"):
            for value in content[key]:
                if value < 1:
                    raise ConfigError(f"{key} values must be positive.", key=key)

        for value in content["sweep.association_factor"]:
            if not value >= 0:
                raise ConfigError(
                    "sweep.association_factor values must be nonnegative.",
                    key="sweep.association_factor",
                )

        for value in content["sweep.proximity"]:
            if not value > 0:
                raise ConfigError(
                    "sweep.proximity values must be positive.", key="sweep.proximity"
                )

    def as_dict(self) -> Dict[str, Any]:
        """
        Provides a copy of the content, keys sorted.
        """

        return {x: copy.deepcopy(self.content[x]) for x in sorted(self.content)}

    def digest(self) -> str:
        """
        Provides the digest of the configuration.
        """

        return HashHelper().hash_data(json.dumps(self.as_dict(), sort_keys=True))

    def planted_support(self, dataset: Optional[str] = None) -> float:
        """
        Provides the planted support: the explicit one, or the one of the
        dataset preset.
        """

        if dataset is None and self["workload.planted_support"] is not None:
            return self["workload.planted_support"]

        return edge_cache.spaarc.defaults.simulation.DATASETS[
            dataset or self["workload.dataset"]
        ]

    def workload_config(
        self,
        *,
        seed: Optional[int] = None,
        dataset: Optional[str] = None,
        users: Optional[int] = None,
        objects: Optional[int] = None,
    ) -> WorkloadConfig:
        """
        Provides the workload config.
        """

        with _reported_as("workload", {"obstacle_rects": "workload.obstacles"}):
            return WorkloadConfig(
                n_objects=objects or self["workload.n_objects"],
                n_users=users or self["workload.n_users"],
                planted_support=self.planted_support(dataset),
                planted_itemset_fraction=self["workload.planted_itemset_fraction"],
                region_size=self["workload.region_size"],
                obstacle_rects=tuple(
                    Rect.from_string(x) for x in self["workload.obstacles"]
                ),
                arrival_rate=self["workload.arrival_rate"],
                interaction_mean=self["workload.interaction_mean"],
                interaction_std=self["workload.interaction_std"],
                seed=self["workload.seed"] if seed is None else seed,
                horizon=self["workload.horizon"],
                filler_mean=self["workload.filler_mean"],
                walk_speed=self["workload.walk_speed"],
                min_dwell=self["workload.min_dwell"],
                min_spacing=self["workload.min_spacing"],
                max_spacing=self["workload.max_spacing"],
                size_min_mb=self["workload.size_min_mb"],
                size_max_mb=self["workload.size_max_mb"],
                shift_at=self["workload.shift_at"],
                max_access_gap=self["workload.max_access_gap"],
                history_sessions=self["workload.history_sessions"],
            )

    def cache_config(self, catalog: Catalog, policy: Optional[str] = None) -> CacheConfig:
        """
        Provides the cache config of the given catalog.
        """

        with _reported_as("cache"):
            if self["cache.capacity_mb"] is not None:
                return CacheConfig(
                    capacity_mb=self["cache.capacity_mb"],
                    policy=policy or self["cache.policy"],
                )

            return CacheConfig.from_fraction(
                catalog,
                self["cache.capacity_fraction"],
                policy=policy or self["cache.policy"],
            )

    def spaarc_params(
        self,
        *,
        min_support: Optional[float] = None,
        min_confidence: Optional[float] = None,
        association_factor: Optional[float] = None,
        proximity: Optional[float] = None,
    ) -> SpaarcParams:
        """
        Provides the prefetcher knobs, optionally overriden by a sweep point.
        """

        def pick(value: Optional[float], key: str) -> float:
            return self[key] if value is None else value

        with _reported_as(
            "spaarc",
            {
                "min_support": "rules.min_support",
                "min_confidence": "rules.min_confidence",
                "session_gap": "sim.session_gap",
            },
        ):
            return SpaarcParams(
                min_support=pick(min_support, "rules.min_support"),
                min_confidence=pick(min_confidence, "rules.min_confidence"),
                association_factor_threshold=pick(
                    association_factor, "spaarc.association_factor_threshold"
                ),
                window=self["spaarc.window"],
                proximity_threshold=pick(proximity, "spaarc.proximity_threshold"),
                history_window=self["spaarc.history_window"],
                window_scope=self["spaarc.window_scope"],
                lazy_queue_capacity=self["spaarc.lazy_queue_capacity"],
                session_gap=self["sim.session_gap"],
            )

    def tuner_config(self) -> TunerConfig:
        """
        Provides the tuner knobs.
        """

        with _reported_as(
            "tuner",
            {
                "max_itemset_size": "rules.max_itemset_size",
                "algorithm": "rules.algorithm",
            },
        ):
            return TunerConfig(
                degradation_threshold=self["tuner.degradation_threshold"],
                min_confidence=self["tuner.min_confidence"],
                grid_size=self["tuner.grid_size"],
                ratio_threshold=self["tuner.ratio_threshold"],
                kurtosis_threshold=self["tuner.kurtosis_threshold"],
                rulesets=self["tuner.rulesets"],
                history=self["tuner.history"],
                viewpoint_size=self["tuner.viewpoint_size"],
                generation_latency=self["tuner.generation_latency"],
                hit_rate_scope=self["tuner.hit_rate_scope"],
                max_itemset_size=self["rules.max_itemset_size"],
                algorithm=self["rules.algorithm"],
            )

    def latency_model(self) -> LatencyModel:
        """
        Provides the latency model.
        """

        with _reported_as("sim"):
            return LatencyModel(
                cloud_rtt_ms=self["sim.cloud_rtt_ms"],
                edge_hit_ms=self["sim.edge_hit_ms"],
                immersion_budget_ms=self["sim.immersion_budget_ms"],
            )

    def run_config(
        self,
        catalog: Catalog,
        *,
        mode: Optional[str] = None,
        policy: Optional[str] = None,
        seed: Optional[int] = None,
        min_support: Optional[float] = None,
        min_confidence: Optional[float] = None,
        association_factor: Optional[float] = None,
        proximity: Optional[float] = None,
    ) -> RunConfig:
        """
        Provides the config of a run over the given catalog.
        """

        spaarc = self.spaarc_params(
            min_support=min_support,
            min_confidence=min_confidence,
            association_factor=association_factor,
            proximity=proximity,
        )

        with _reported_as(
            "sim",
            {
                "mode": "sim.mode",
                "training_transactions": "rules.training_transactions",
                "max_itemset_size": "rules.max_itemset_size",
                "algorithm": "rules.algorithm",
                "walk_speed": "workload.walk_speed",
            },
        ):
            return RunConfig(
                mode=Mode.parse(mode or self["sim.mode"]),
                cache=self.cache_config(catalog, policy),
                spaarc=spaarc,
                tuner=self.tuner_config(),
                latency=self.latency_model(),
                seed=self["workload.seed"] if seed is None else seed,
                max_itemset_size=self["rules.max_itemset_size"],
                algorithm=self["rules.algorithm"],
                training_transactions=self["rules.training_transactions"],
                movement_step=self["sim.movement_step"],
                walk_speed=self["workload.walk_speed"],
                decision_log=self["sim.decision_log"],
            )

    def sweep_axis(self, key: str, fallback: Any) -> List[Any]:
        """
        Provides the values of a sweep axis, or the single fallback value when
        the axis is empty.
        """

        values = self[key]

        return list(values) if values else [fallback]

