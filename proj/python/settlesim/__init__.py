# Copyright 2026 The Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Deterministic settlement simulator.

JSON-shaped values (scenarios, instances, workload parameters, summaries)
are plain dicts and lists. Stream items are dicts: ``{"tick": t}`` is a
hiaton and ``{"tick": t, "value": v}`` carries a payload.
"""

from ._settlesim import (
    ORACLE_MAX_ELEMENTS,
    InstanceTooLarge,
    InvalidInstance,
    ScenarioError,
    check_feasibility,
    compare,
    convert_trace,
    exhaustive_oracle,
    gen_elements,
    gen_event_stream,
    generate_scenario,
    is_dense,
    materialize_instance,
    merge,
    next_random,
    run_scenario,
    scenario_hash,
    select_partition,
    shift,
    strip_hiatons,
    summarize_trace,
    summarize_trace_file,
    tarjan_scc,
    validate_instance,
)

__all__ = [
    "ORACLE_MAX_ELEMENTS",
    "InstanceTooLarge",
    "InvalidInstance",
    "ScenarioError",
    "check_feasibility",
    "compare",
    "convert_trace",
    "exhaustive_oracle",
    "gen_elements",
    "gen_event_stream",
    "generate_scenario",
    "is_dense",
    "materialize_instance",
    "merge",
    "next_random",
    "run_scenario",
    "scenario_hash",
    "select_partition",
    "shift",
    "strip_hiatons",
    "summarize_trace",
    "summarize_trace_file",
    "tarjan_scc",
    "validate_instance",
]
