"""Offered-load sweeps over both modes."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

from database.db_manager import DatabaseManager
from harness.experiment import run_experiment
from models.metrics import MetricsReport
from models.scenario_config import Mode, ScenarioConfig

logger = logging.getLogger(__name__)

DEFAULT_MODES: tuple[Mode, ...] = (Mode.DUAL, Mode.SINGLE)
DEFAULT_ONSET_THRESHOLD: float = 0.05


@dataclass(frozen=True)
class SweepRow:
    """One (mode, per-flow load) point of a sweep."""

    mode: Mode
    load_mbps: float
    report: MetricsReport


def sweep(
    config: ScenarioConfig,
    loads: Sequence[float],
    modes: Sequence[Mode] = DEFAULT_MODES,
    store: DatabaseManager | None = None,
) -> list[SweepRow]:
    """Run every load under every mode; rows come back mode-major in the order given."""
    rows: list[SweepRow] = []
    for mode in modes:
        for load in loads:
            logger.info("Sweep %s: %s at %.3g Mbit/s per flow", config.name, mode.value, load)
            point: ScenarioConfig = config.with_mode(mode).with_load(load)
            rows.append(SweepRow(mode, load, run_experiment(point, store)))
    return rows


def saturation_onset(
    rows: Sequence[SweepRow],
    mode: Mode,
    threshold: float = DEFAULT_ONSET_THRESHOLD,
) -> float | None:
    """Smallest load whose mean per-flow throughput falls short of it by more than ``threshold``.

    None when the mode never saturates within the sweep.
    """
    for row in sorted((row for row in rows if row.mode is mode), key=lambda row: row.load_mbps):
        if row.load_mbps <= 0:
            continue
        shortfall: float = (row.load_mbps - row.report.mean_throughput_mbps) / row.load_mbps
        if shortfall > threshold:
            return row.load_mbps
    return None
