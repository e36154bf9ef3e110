"""Scenario parsing, experiments, sweeps and reports."""

from .scenario_parser import ScenarioParser, parse_scenario, load_scenario
from .metrics import MetricsCalculator
from .experiment import RunResult, converge, run_once, run_experiment, stored_flow_metrics, tree_dump
from .sweep import SweepRow, sweep, saturation_onset
from .reports import emit_csv, emit_tree_csv, emit_channels_csv, tree_text, format_number

__all__ = [
    "ScenarioParser",
    "parse_scenario",
    "load_scenario",
    "MetricsCalculator",
    "RunResult",
    "converge",
    "run_once",
    "run_experiment",
    "stored_flow_metrics",
    "tree_dump",
    "SweepRow",
    "sweep",
    "saturation_onset",
    "emit_csv",
    "emit_tree_csv",
    "emit_channels_csv",
    "tree_text",
    "format_number",
]
