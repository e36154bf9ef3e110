"""Per-flow throughput, delay and drops, and Jain's fairness index."""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from models.metrics import FlowMetrics, FrameRecord, MetricsReport
from models.scenario_config import FlowSpec


class MetricsCalculator:
    """Turns raw frame records into a MetricsReport."""

    US_PER_MS: float = 1000.0

    @staticmethod
    def jain_index(values: Iterable[float]) -> float:
        """(Σx)² / (n·Σx²); 1.0 for no flows or all-zero throughput."""
        x = np.asarray(list(values), dtype=float)
        if x.size == 0:
            return 1.0
        squares: float = float(np.sum(x * x))
        if squares == 0.0:
            return 1.0
        return float(np.sum(x) ** 2 / (x.size * squares))

    @classmethod
    def flow_metrics(
        cls,
        records: Sequence[FrameRecord],
        flows: Sequence[FlowSpec],
        duration_us: int,
    ) -> list[FlowMetrics]:
        """One FlowMetrics per flow, in flow id order."""
        flow_ids = np.array([record.flow_id for record in records], dtype=np.int64)
        delivered_mask = np.array([record.delivered for record in records], dtype=bool)
        dropped_mask = np.array([record.dropped for record in records], dtype=bool)
        octets = np.array([record.octets for record in records], dtype=np.int64)
        delays = np.array(
            [record.delay_us if record.delivered else 0 for record in records], dtype=float
        )

        metrics: list[FlowMetrics] = []
        for flow in sorted(flows, key=lambda spec: spec.flow_id):
            mine = flow_ids == flow.flow_id
            arrived = mine & delivered_mask
            generated: int = int(np.count_nonzero(mine))
            delivered: int = int(np.count_nonzero(arrived))
            drops: int = int(np.count_nonzero(mine & dropped_mask))

            throughput: float = 0.0
            if duration_us > 0:
                throughput = float(np.sum(octets[arrived])) * 8 / duration_us
            delay: float = float(np.mean(delays[arrived])) / cls.US_PER_MS if delivered else 0.0

            metrics.append(
                FlowMetrics(
                    flow_id=flow.flow_id,
                    src_node=flow.src_node,
                    offered_load_mbps=flow.rate_mbps,
                    throughput_mbps=throughput,
                    delay_ms=delay,
                    drops=drops,
                    generated=generated,
                    delivered=delivered,
                    queued=generated - delivered - drops,
                )
            )
        return metrics

    @classmethod
    def average(cls, reports: Sequence[MetricsReport]) -> MetricsReport:
        """Mean over repetitions; flows are matched by id."""
        if len(reports) == 1:
            return reports[0]
        first: MetricsReport = reports[0]

        flows: list[FlowMetrics] = []
        for index, flow in enumerate(first.flows):
            group: list[FlowMetrics] = [report.flows[index] for report in reports]
            flows.append(
                FlowMetrics(
                    flow_id=flow.flow_id,
                    src_node=flow.src_node,
                    offered_load_mbps=flow.offered_load_mbps,
                    throughput_mbps=float(np.mean([item.throughput_mbps for item in group])),
                    delay_ms=float(np.mean([item.delay_ms for item in group])),
                    drops=round(float(np.mean([item.drops for item in group]))),
                    generated=round(float(np.mean([item.generated for item in group]))),
                    delivered=round(float(np.mean([item.delivered for item in group]))),
                    queued=round(float(np.mean([item.queued for item in group]))),
                )
            )

        return MetricsReport(
            mode=first.mode,
            offered_load_mbps=first.offered_load_mbps,
            flows=flows,
            jain_index=float(np.mean([report.jain_index for report in reports])),
            convergence_us=round(float(np.mean([report.convergence_us for report in reports]))),
            duration_us=first.duration_us,
            nodes=first.nodes,
            repetitions=len(reports),
        )
