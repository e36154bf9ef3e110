"""Base repository with shared record store operations."""

from __future__ import annotations

import sqlite3
from abc import ABC, abstractmethod
from collections.abc import Iterable
from typing import TYPE_CHECKING, Generic, TypeVar

if TYPE_CHECKING:
    from database.db_manager import DatabaseManager

T = TypeVar("T")


class BaseRepository(ABC, Generic[T]):
    """Base class for the repositories of the record store."""

    # Constants - Error Messages
    ERROR_NO_CONNECTION: str = "Record store connection not established."

    # Constants - Default Values
    DEFAULT_ID_ON_ERROR: int = -1

    def __init__(self, db_manager: DatabaseManager) -> None:
        """Initialize repository with database manager."""
        self.db: DatabaseManager = db_manager

    # ------------------------------------------------------------------
    # Abstract Methods - Must Be Implemented by Child Classes
    # ------------------------------------------------------------------

    @abstractmethod
    def _row_to_entity(self, row: sqlite3.Row) -> T:
        """Convert database row to entity object."""

    @abstractmethod
    def _entity_to_values(self, run_id: int | None, entity: T) -> tuple:
        """Extract entity data as tuple for INSERT."""

    @abstractmethod
    def _get_insert_sql(self) -> str:
        """Get SQL for INSERT operation."""

    @abstractmethod
    def _get_select_by_run_sql(self) -> str:
        """Get SQL selecting every entity of one run."""

    # ------------------------------------------------------------------
    # Helper Methods - Database Access
    # ------------------------------------------------------------------

    def _get_cursor(self) -> sqlite3.Cursor:
        """Get database cursor or raise if connection unavailable."""
        if self.db.conn is None:
            raise RuntimeError(self.ERROR_NO_CONNECTION)
        return self.db.conn.cursor()

    # ------------------------------------------------------------------
    # Common Operations
    # ------------------------------------------------------------------

    def insert(self, entity: T, run_id: int | None = None) -> int:
        """Insert one entity and return its row id."""
        cursor: sqlite3.Cursor = self._get_cursor()
        cursor.execute(self._get_insert_sql(), self._entity_to_values(run_id, entity))
        row_id: int | None = cursor.lastrowid
        return row_id if row_id is not None else self.DEFAULT_ID_ON_ERROR

    def insert_many(self, entities: Iterable[T], run_id: int | None = None) -> None:
        """Bulk insert."""
        cursor: sqlite3.Cursor = self._get_cursor()
        cursor.executemany(
            self._get_insert_sql(),
            (self._entity_to_values(run_id, entity) for entity in entities),
        )

    def get_for_run(self, run_id: int) -> list[T]:
        """Every entity stored for ``run_id``."""
        cursor: sqlite3.Cursor = self._get_cursor()
        cursor.execute(self._get_select_by_run_sql(), (run_id,))
        return [self._row_to_entity(row) for row in cursor.fetchall()]
