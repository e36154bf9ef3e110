"""Repository for Run and Flow rows."""

from __future__ import annotations

import sqlite3

from database.base_repository import BaseRepository
from models.metrics import RunInfo
from models.scenario_config import FlowSpec


class RunRepository(BaseRepository[RunInfo]):
    """Handle record store operations for runs and their flows."""

    # ------------------------------------------------------------------
    # SQL Query Templates
    # ------------------------------------------------------------------

    SQL_INSERT: str = """
        INSERT INTO Run (
            scenario, mode, offered_load_mbps, seed, window_start_us, window_end_us
        ) VALUES (?, ?, ?, ?, ?, ?)
    """

    SQL_SELECT_BY_ID: str = "SELECT * FROM Run WHERE id = ?"

    SQL_INSERT_FLOW: str = """
        INSERT INTO Flow (run_id, flow_id, src_node, offered_load_mbps)
        VALUES (?, ?, ?, ?)
    """

    # ------------------------------------------------------------------
    # Abstract Method Implementations (Required by BaseRepository)
    # ------------------------------------------------------------------

    def _row_to_entity(self, row: sqlite3.Row) -> RunInfo:
        """Convert database row to RunInfo object."""
        return RunInfo(
            id=row["id"],
            scenario=row["scenario"],
            mode=row["mode"],
            offered_load_mbps=row["offered_load_mbps"],
            seed=row["seed"],
            window_start_us=row["window_start_us"],
            window_end_us=row["window_end_us"],
        )

    def _entity_to_values(self, run_id: int | None, entity: RunInfo) -> tuple:
        return (
            entity.scenario,
            entity.mode,
            entity.offered_load_mbps,
            entity.seed,
            entity.window_start_us,
            entity.window_end_us,
        )

    def _get_insert_sql(self) -> str:
        return self.SQL_INSERT

    def _get_select_by_run_sql(self) -> str:
        return self.SQL_SELECT_BY_ID

    # ------------------------------------------------------------------
    # Runs
    # ------------------------------------------------------------------

    def create(self, run: RunInfo, flows: tuple[FlowSpec, ...]) -> int:
        """Store a run and its flows; sets and returns the run id."""
        run.id = self.insert(run)
        self._get_cursor().executemany(
            self.SQL_INSERT_FLOW,
            [(run.id, flow.flow_id, flow.src_node, flow.rate_mbps) for flow in flows],
        )
        return run.id

    def get_by_id(self, run_id: int) -> RunInfo | None:
        runs: list[RunInfo] = self.get_for_run(run_id)
        return runs[0] if runs else None
