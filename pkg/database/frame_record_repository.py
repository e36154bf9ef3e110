"""Repository for raw per-frame records, with the SQL side of metric aggregation."""

from __future__ import annotations

import sqlite3

from database.base_repository import BaseRepository
from models.metrics import FlowMetrics, FrameRecord


class FrameRecordRepository(BaseRepository[FrameRecord]):
    """Handle record store operations for frame records."""

    # ------------------------------------------------------------------
    # SQL Query Templates
    # ------------------------------------------------------------------

    SQL_INSERT: str = """
        INSERT INTO FrameRecord (
            run_id, flow_id, seq, src_node, created_us,
            delivered_us, dropped, hops, octets
        ) VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)
    """

    SQL_SELECT_BY_RUN: str = """
        SELECT * FROM FrameRecord
        WHERE run_id = ?
        ORDER BY flow_id, seq
    """

    SQL_AGGREGATE_FLOWS: str = """
        SELECT
            f.flow_id AS flow_id,
            f.src_node AS src_node,
            f.offered_load_mbps AS offered_load_mbps,
            COUNT(r.seq) AS generated,
            COALESCE(SUM(r.delivered_us IS NOT NULL), 0) AS delivered,
            COALESCE(SUM(CASE WHEN r.delivered_us IS NOT NULL THEN r.octets ELSE 0 END), 0)
                AS delivered_octets,
            AVG(CASE WHEN r.delivered_us IS NOT NULL THEN r.delivered_us - r.created_us END)
                AS mean_delay_us,
            COALESCE(SUM(r.dropped), 0) AS drops
        FROM Flow f
        LEFT JOIN FrameRecord r ON r.run_id = f.run_id AND r.flow_id = f.flow_id
        WHERE f.run_id = ?
        GROUP BY f.flow_id, f.src_node, f.offered_load_mbps
        ORDER BY f.flow_id
    """

    # ------------------------------------------------------------------
    # Abstract Method Implementations (Required by BaseRepository)
    # ------------------------------------------------------------------

    def _row_to_entity(self, row: sqlite3.Row) -> FrameRecord:
        """Convert database row to FrameRecord object."""
        return FrameRecord(
            flow_id=row["flow_id"],
            seq=row["seq"],
            src_node=row["src_node"],
            created_us=row["created_us"],
            delivered_us=row["delivered_us"],
            dropped=bool(row["dropped"]),
            hops=row["hops"],
            octets=row["octets"],
        )

    def _entity_to_values(self, run_id: int | None, entity: FrameRecord) -> tuple:
        return (
            run_id,
            entity.flow_id,
            entity.seq,
            entity.src_node,
            entity.created_us,
            entity.delivered_us,
            int(entity.dropped),
            entity.hops,
            entity.octets,
        )

    def _get_insert_sql(self) -> str:
        return self.SQL_INSERT

    def _get_select_by_run_sql(self) -> str:
        return self.SQL_SELECT_BY_RUN

    # ------------------------------------------------------------------
    # Aggregation
    # ------------------------------------------------------------------

    def aggregate_flows(self, run_id: int, duration_us: int) -> list[FlowMetrics]:
        """Per-flow metrics recomputed in SQL from the stored records."""
        cursor: sqlite3.Cursor = self._get_cursor()
        cursor.execute(self.SQL_AGGREGATE_FLOWS, (run_id,))

        metrics: list[FlowMetrics] = []
        for row in cursor.fetchall():
            generated: int = row["generated"]
            delivered: int = row["delivered"]
            drops: int = row["drops"]
            mean_delay_us: float | None = row["mean_delay_us"]
            metrics.append(
                FlowMetrics(
                    flow_id=row["flow_id"],
                    src_node=row["src_node"],
                    offered_load_mbps=row["offered_load_mbps"],
                    throughput_mbps=(
                        row["delivered_octets"] * 8 / duration_us if duration_us > 0 else 0.0
                    ),
                    delay_ms=(mean_delay_us or 0.0) / 1000,
                    drops=drops,
                    generated=generated,
                    delivered=delivered,
                    queued=generated - delivered - drops,
                )
            )
        return metrics
