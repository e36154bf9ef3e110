"""Handles the run and sweep subcommands."""

from __future__ import annotations

import argparse
import logging
from typing import TYPE_CHECKING

from database.db_manager import DatabaseManager
from harness.experiment import RunResult, run_once, stored_flow_metrics
from harness.metrics import MetricsCalculator
from harness.reports import emit_csv
from harness.sweep import saturation_onset, sweep
from models.metrics import MetricsReport
from models.scenario_config import Mode, ScenarioConfig
from utils.errors import ConfigurationError, ConsistencyError

if TYPE_CHECKING:
    from main import WifixApp

logger = logging.getLogger(__name__)


class ExperimentActions:
    """Handles the run and sweep subcommands."""

    # ------------------------------------------------------------------
    # Constants
    # ------------------------------------------------------------------

    ERROR_LOADS: str = "--loads must be a comma-separated list of numbers, got {text!r}"
    ERROR_SQL_MISMATCH: str = "stored records disagree with the in-memory metrics for flow {flow}"
    MSG_ONSET: str = "saturation onset ({mode}): {onset}"
    MSG_ONSET_NONE: str = "above sweep"
    TOLERANCE: float = 1e-9

    # ------------------------------------------------------------------
    # Initialization
    # ------------------------------------------------------------------

    def __init__(self, app: WifixApp) -> None:
        self.app: WifixApp = app

    # ------------------------------------------------------------------
    # Run
    # ------------------------------------------------------------------

    def run(self, args: argparse.Namespace) -> int:
        """Converge, run the traffic window for every repetition, write the results table."""
        config: ScenarioConfig = self.app.load_scenario(args)
        if args.load is not None:
            config = config.with_load(args.load)
        logger.info("Running %s in %s mode, %d repetition(s)", config.name, config.mode.value, config.repetitions)

        with DatabaseManager(args.records) as store:
            results: list[RunResult] = [
                run_once(config, seed=config.seed + repetition, store=store, trace=bool(args.trace))
                for repetition in range(config.repetitions)
            ]
            for result in results:
                self._cross_check(store, result)

        if args.trace:
            results[0].simulator.trace.dump(args.trace)

        report: MetricsReport = MetricsCalculator.average([result.report for result in results])
        with self.app.open_output(args.out) as stream:
            emit_csv([report], stream)
        return 0

    def _cross_check(self, store: DatabaseManager, result: RunResult) -> None:
        """The SQL aggregation over stored records must match the numpy pass."""
        assert result.run_id is not None
        stored = {flow.flow_id: flow for flow in stored_flow_metrics(store, result.run_id)}
        for flow in result.report.flows:
            other = stored.get(flow.flow_id)
            if (
                other is None
                or other.delivered != flow.delivered
                or other.drops != flow.drops
                or abs(other.throughput_mbps - flow.throughput_mbps) > self.TOLERANCE
            ):
                raise ConsistencyError(self.ERROR_SQL_MISMATCH.format(flow=flow.flow_id))

    # ------------------------------------------------------------------
    # Sweep
    # ------------------------------------------------------------------

    def sweep(self, args: argparse.Namespace) -> int:
        """One experiment per (mode, load); saturation onset per mode goes to stderr."""
        config: ScenarioConfig = self.app.load_scenario(args)
        loads: list[float] = self.parse_loads(args.loads)
        modes: list[Mode] = [Mode.parse(text) for text in args.modes.split(",")]

        with DatabaseManager(args.records) as store:
            rows = sweep(config, loads, modes, store)

        with self.app.open_output(args.out) as stream:
            emit_csv([row.report for row in rows], stream)

        for mode in modes:
            onset = saturation_onset(rows, mode, args.threshold)
            self.app.print(
                self.MSG_ONSET.format(
                    mode=mode.value, onset=self.MSG_ONSET_NONE if onset is None else onset
                ),
                err=True,
            )
        return 0

    @classmethod
    def parse_loads(cls, text: str) -> list[float]:
        """``1,2,3`` → [1.0, 2.0, 3.0]; an empty string is an empty sweep."""
        try:
            return [float(item) for item in text.split(",") if item.strip()]
        except ValueError:
            raise ConfigurationError(cls.ERROR_LOADS.format(text=text)) from None
