"""Converge a topology, drive traffic through it and measure the result."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from database.db_manager import DatabaseManager
from database.frame_record_repository import FrameRecordRepository
from database.run_repository import RunRepository
from harness.metrics import MetricsCalculator
from models.metrics import FlowMetrics, FrameRecord, MetricsReport, NodeSummary, RunInfo
from models.scenario_config import ScenarioConfig
from simulation.network import NetworkSimulator
from utils.errors import ExperimentError

logger = logging.getLogger(__name__)


@dataclass
class RunResult:
    """One repetition: its report, raw records and the simulator it ran on."""

    report: MetricsReport
    records: list[FrameRecord]
    simulator: NetworkSimulator
    run_id: int | None = None


def tree_dump(summaries: list[NodeSummary]) -> str:
    """Indented parent/child view of a (possibly partial) tree."""
    by_parent: dict[str | None, list[NodeSummary]] = {}
    known: set[str] = {summary.node_id for summary in summaries}
    for summary in summaries:
        parent: str | None = summary.parent if summary.parent in known else None
        by_parent.setdefault(parent, []).append(summary)

    lines: list[str] = []

    def walk(parent: str | None, indent: int) -> None:
        for summary in by_parent.get(parent, []):
            depth: str = "-" if summary.depth is None else str(summary.depth)
            up: str = "-" if summary.up_channel is None else str(summary.up_channel)
            down: str = "-" if summary.down_channel is None else str(summary.down_channel)
            lines.append(f"{'  ' * indent}{summary.node_id} depth={depth} up={up} down={down}")
            walk(summary.node_id, indent + 1)

    walk(None, 0)
    return "\n".join(lines)


def converge(simulator: NetworkSimulator) -> int:
    """Run until every node is attached and the tree holds still.

    Checks once per beacon interval; the tree must stay unchanged for
    ``convergence_quiet_intervals`` checks. Returns the time of the last
    change.
    """
    constants = simulator.constants
    step: int = constants.beacon_interval_us
    deadline: int = simulator.now_us + constants.convergence_timeout_us

    signature: tuple = simulator.topology_signature()
    changed_at: int = simulator.now_us
    quiet: int = 0

    while simulator.now_us < deadline:
        simulator.run_until(simulator.now_us + step)
        current: tuple = simulator.topology_signature()
        if current != signature or not simulator.all_attached():
            signature = current
            changed_at = simulator.now_us
            quiet = 0
            continue
        quiet += 1
        if quiet >= constants.convergence_quiet_intervals:
            simulator.check_tunnel_consistency()
            logger.info("Converged at %.3f ms", changed_at / 1000)
            return changed_at

    raise ExperimentError(
        f"topology did not converge within {constants.convergence_timeout_s} s",
        tree_dump(simulator.node_summaries()),
    )


def run_once(
    config: ScenarioConfig,
    seed: int | None = None,
    store: DatabaseManager | None = None,
    trace: bool = False,
) -> RunResult:
    """One repetition: converge, run the traffic window, aggregate."""
    simulator = NetworkSimulator(config, seed=seed, trace=trace)
    convergence_us: int = converge(simulator)

    window_start, window_end = simulator.start_traffic(simulator.now_us, config.duration_us)
    simulator.run_until(window_end)
    records: list[FrameRecord] = simulator.finalize_records()
    duration_us: int = window_end - window_start

    flows: list[FlowMetrics] = MetricsCalculator.flow_metrics(records, config.flows, duration_us)
    report = MetricsReport(
        mode=config.mode.value,
        offered_load_mbps=config.offered_load_mbps,
        flows=flows,
        jain_index=MetricsCalculator.jain_index(flow.throughput_mbps for flow in flows),
        convergence_us=convergence_us,
        duration_us=duration_us,
        nodes=simulator.node_summaries(),
    )

    run_id: int | None = None
    if store is not None:
        run_id = store_run(store, config, simulator.seed, window_start, window_end, records)

    logger.info(
        "Run %s/%s load=%.3g seed=%d: mean throughput %.4g Mbit/s, drops %d",
        config.name,
        report.mode,
        report.offered_load_mbps,
        simulator.seed,
        report.mean_throughput_mbps,
        report.total_drops,
    )
    return RunResult(report, records, simulator, run_id)


def store_run(
    store: DatabaseManager,
    config: ScenarioConfig,
    seed: int,
    window_start: int,
    window_end: int,
    records: list[FrameRecord],
) -> int:
    """Persist one run's flows and raw records; returns the run id."""
    run = RunInfo(
        scenario=config.name,
        mode=config.mode.value,
        offered_load_mbps=config.offered_load_mbps,
        seed=seed,
        window_start_us=window_start,
        window_end_us=window_end,
    )
    run_id: int = RunRepository(store).create(run, config.flows)
    FrameRecordRepository(store).insert_many(records, run_id)
    store.commit()
    return run_id


def stored_flow_metrics(store: DatabaseManager, run_id: int) -> list[FlowMetrics]:
    """Per-flow metrics recomputed in SQL from a stored run."""
    run: RunInfo | None = RunRepository(store).get_by_id(run_id)
    if run is None:
        raise ExperimentError(f"no stored run with id {run_id}")
    return FrameRecordRepository(store).aggregate_flows(run_id, run.duration_us)


def run_experiment(config: ScenarioConfig, store: DatabaseManager | None = None) -> MetricsReport:
    """All repetitions of one configuration, averaged; repetition k uses seed + k."""
    reports: list[MetricsReport] = [
        run_once(config, seed=config.seed + repetition, store=store).report
        for repetition in range(config.repetitions)
    ]
    return MetricsCalculator.average(reports)
