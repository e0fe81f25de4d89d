"""
SPAARC edge cache simulator - Association and proximity aware prefetching for
edge caches.

Provides the default configuration of our simulations.

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

from typing import Dict

DATASETS: Dict[str, float] = {
    "DS30": 0.30,
    "DS45": 0.45,
    "DS60": 0.60,
    "DS75": 0.75,
}

MODES: tuple = ("baseline", "association-only", "spaarc", "spaarc-tune")
WORKLOAD_SOURCES: tuple = ("generate", "trace", "spmf")
ARM_ALGORITHMS: tuple = ("apriori", "fpgrowth")
WINDOW_SCOPES: tuple = ("global", "user")
HIT_RATE_SCOPES: tuple = ("viewpoint", "cumulative")

DEFAULT_SESSION_GAP: float = 60.0
DEFAULT_MAX_ITEMSET_SIZE: int = 4
DEFAULT_LAZY_QUEUE_CAPACITY: int = 1024
DEGRADATION_EPSILON: float = 1e-9
KURTOSIS_SPREAD_TOLERANCE: float = 1e-12

CONFIGURATION: dict = {
    "workload.source": "generate",
    "workload.dataset": "DS30",
    "workload.planted_support": None,
    "workload.n_objects": 50,
    "workload.n_users": 100,
    "workload.horizon": None,
    "workload.planted_itemset_fraction": 0.2,
    "workload.filler_mean": 4.0,
    "workload.region_size": 200.0,
    "workload.obstacles": ["40:40:60:60", "130:120:160:135"],
    "workload.min_spacing": 10.0,
    "workload.max_spacing": 15.0,
    "workload.size_min_mb": 10.0,
    "workload.size_max_mb": 15.0,
    "workload.arrival_rate": 0.05,
    "workload.interaction_mean": 10.0,
    "workload.interaction_std": 3.0,
    "workload.min_dwell": 0.5,
    "workload.walk_speed": 1.0,
    "workload.max_access_gap": 40.0,
    "workload.history_sessions": 100,
    "workload.shift_at": None,
    "workload.seed": 42,
    "workload.trace_file": None,
    "workload.catalog_file": None,
    "workload.spmf_file": None,
    "workload.history_file": None,
    "workload.spmf_limit": None,
    "cache.policy": "FIFO",
    "cache.capacity_fraction": 0.2,
    "cache.capacity_mb": None,
    "rules.min_support": 0.3,
    "rules.min_confidence": 0.45,
    "rules.max_itemset_size": DEFAULT_MAX_ITEMSET_SIZE,
    "rules.algorithm": "apriori",
    "rules.training_transactions": 100,
    "spaarc.association_factor_threshold": 1.0,
    "spaarc.window": 50,
    "spaarc.window_scope": "global",
    "spaarc.proximity_threshold": 15.0,
    "spaarc.history_window": 10,
    "spaarc.lazy_queue_capacity": DEFAULT_LAZY_QUEUE_CAPACITY,
    "tuner.degradation_threshold": 0.05,
    "tuner.min_confidence": 0.1,
    "tuner.grid_size": 8,
    "tuner.ratio_threshold": 20.0,
    "tuner.kurtosis_threshold": 2.0,
    "tuner.rulesets": 5,
    "tuner.history": 100,
    "tuner.viewpoint_size": 10,
    "tuner.generation_latency": 1,
    "tuner.hit_rate_scope": "viewpoint",
    "sim.mode": "spaarc",
    "sim.cloud_rtt_ms": 60.0,
    "sim.edge_hit_ms": 5.0,
    "sim.immersion_budget_ms": 20.0,
    "sim.session_gap": DEFAULT_SESSION_GAP,
    "sim.movement_step": 1.0,
    "sim.decision_log": False,
    "experiment.name": "experiment",
    "experiment.modes": ["baseline", "spaarc"],
    "experiment.policies": ["FIFO"],
    "experiment.seeds": [42],
    "experiment.max_workers": 1,
    "sweep.datasets": [],
    "sweep.users": [],
    "sweep.objects": [],
    "sweep.min_support": [],
    "sweep.min_confidence": [],
    "sweep.association_factor": [],
    "sweep.proximity": [],
}

# Accepted value kinds, used to coerce what the config files give us.
SCHEMA: Dict[str, str] = {
    "workload.source": "str",
    "workload.dataset": "str",
    "workload.planted_support": "optional[float]",
    "workload.n_objects": "int",
    "workload.n_users": "int",
    "workload.horizon": "optional[float]",
    "workload.planted_itemset_fraction": "float",
    "workload.filler_mean": "float",
    "workload.region_size": "float",
    "workload.obstacles": "list[str]",
    "workload.min_spacing": "float",
    "workload.max_spacing": "float",
    "workload.size_min_mb": "float",
    "workload.size_max_mb": "float",
    "workload.arrival_rate": "float",
    "workload.interaction_mean": "float",
    "workload.interaction_std": "float",
    "workload.min_dwell": "float",
    "workload.walk_speed": "float",
    "workload.max_access_gap": "float",
    "workload.history_sessions": "int",
    "workload.shift_at": "optional[float]",
    "workload.seed": "int",
    "workload.trace_file": "optional[str]",
    "workload.catalog_file": "optional[str]",
    "workload.spmf_file": "optional[str]",
    "workload.history_file": "optional[str]",
    "workload.spmf_limit": "optional[int]",
    "cache.policy": "str",
    "cache.capacity_fraction": "float",
    "cache.capacity_mb": "optional[float]",
    "rules.min_support": "float",
    "rules.min_confidence": "float",
    "rules.max_itemset_size": "int",
    "rules.algorithm": "str",
    "rules.training_transactions": "int",
    "spaarc.association_factor_threshold": "float",
    "spaarc.window": "int",
    "spaarc.window_scope": "str",
    "spaarc.proximity_threshold": "float",
    "spaarc.history_window": "int",
    "spaarc.lazy_queue_capacity": "int",
    "tuner.degradation_threshold": "float",
    "tuner.min_confidence": "float",
    "tuner.grid_size": "int",
    "tuner.ratio_threshold": "float",
    "tuner.kurtosis_threshold": "float",
    "tuner.rulesets": "int",
    "tuner.history": "int",
    "tuner.viewpoint_size": "int",
    "tuner.generation_latency": "int",
    "tuner.hit_rate_scope": "str",
    "sim.mode": "str",
    "sim.cloud_rtt_ms": "float",
    "sim.edge_hit_ms": "float",
    "sim.immersion_budget_ms": "float",
    "sim.session_gap": "float",
    "sim.movement_step": "float",
    "sim.decision_log": "bool",
    "experiment.name": "str",
    "experiment.modes": "list[str]",
    "experiment.policies": "list[str]",
    "experiment.seeds": "list[int]",
    "experiment.max_workers": "int",
    "sweep.datasets": "list[str]",
    "sweep.users": "list[int]",
    "sweep.objects": "list[int]",
    "sweep.min_support": "list[float]",
    "sweep.min_confidence": "list[float]",
    "sweep.association_factor": "list[float]",
    "sweep.proximity": "list[float]",
}
