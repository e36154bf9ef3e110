"""CSV and text renderings of experiment results, trees and channel weights."""

from __future__ import annotations

import csv
from collections.abc import Iterable, Sequence
from typing import TextIO

from channels.weight_reduction import apply_weight_reduction, candidate_channels
from harness.experiment import tree_dump
from models.metrics import MetricsReport, NodeSummary
from models.node_state import NodeState
from simulation.network import NetworkSimulator

# ------------------------------------------------------------------
# Constants
# ------------------------------------------------------------------

RESULT_COLUMNS: tuple[str, ...] = (
    "mode",
    "offered_load_mbps",
    "flow_id",
    "src_node",
    "throughput_mbps",
    "delay_ms",
    "drops",
    "jain_index",
)
TREE_COLUMNS: tuple[str, ...] = (
    "node", "parent", "depth", "up_channel", "down_channel", "rx", "tx", "relayed", "flooded", "dropped",
)
CHANNEL_COLUMNS: tuple[str, ...] = ("node", "depth", "channel", "weight", "chosen")
SIGNIFICANT_DIGITS: int = 6


def format_number(value: float | int) -> str:
    """Integers as-is, floats to six significant digits with a '.' decimal point."""
    if isinstance(value, int):
        return str(value)
    return f"{value:.{SIGNIFICANT_DIGITS}g}"


def _blank(value: object) -> str:
    return "" if value is None else str(value)


# ------------------------------------------------------------------
# Results
# ------------------------------------------------------------------

def result_rows(reports: Iterable[MetricsReport]) -> list[list[str]]:
    """One row per flow per report, in report order then flow id order."""
    rows: list[list[str]] = []
    for report in reports:
        for flow in sorted(report.flows, key=lambda item: item.flow_id):
            rows.append(
                [
                    report.mode,
                    format_number(float(report.offered_load_mbps)),
                    str(flow.flow_id),
                    flow.src_node,
                    format_number(flow.throughput_mbps),
                    format_number(flow.delay_ms),
                    str(flow.drops),
                    format_number(report.jain_index),
                ]
            )
    return rows


def emit_csv(reports: Iterable[MetricsReport], stream: TextIO) -> None:
    """Write the results table; an empty input still gets the header."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(RESULT_COLUMNS)
    writer.writerows(result_rows(reports))


# ------------------------------------------------------------------
# Tree
# ------------------------------------------------------------------

def tree_text(summaries: Sequence[NodeSummary]) -> str:
    return tree_dump(list(summaries))


def emit_tree_csv(summaries: Sequence[NodeSummary], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(TREE_COLUMNS)
    for summary in summaries:
        writer.writerow(
            [
                summary.node_id,
                _blank(summary.parent),
                _blank(summary.depth),
                _blank(summary.up_channel),
                _blank(summary.down_channel),
                summary.rx,
                summary.tx,
                summary.relayed,
                summary.flooded,
                summary.dropped,
            ]
        )


# ------------------------------------------------------------------
# Channel Weights
# ------------------------------------------------------------------

def channel_rows(simulator: NetworkSimulator) -> list[list[str]]:
    """Weight table each attached MAP used for its AP-side channel.

    Single-radio nodes share one channel and run no AP-side assignment, so they have no rows.
    The mark follows the DOWN channel the node froze at join.
    """
    rows: list[list[str]] = []
    for spec in simulator.config.nodes:
        node: NodeState | None = simulator.nodes.get(spec.node_id)
        if node is None or node.is_gw or node.is_single_nic:
            continue
        if node.depth is None or node.up_nic.band is None or node.down_nic.channel is None:
            continue
        candidates = candidate_channels(node.up_nic.band, simulator.config.plan)
        table = apply_weight_reduction(node.depth, candidates, node.parent_channel_list)
        for channel, weight in table.as_rows():
            rows.append(
                [
                    node.node_id,
                    str(node.depth),
                    str(channel),
                    format_number(weight),
                    "*" if channel == node.down_nic.channel else "",
                ]
            )
    return rows


def emit_channels_csv(simulator: NetworkSimulator, stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CHANNEL_COLUMNS)
    writer.writerows(channel_rows(simulator))
