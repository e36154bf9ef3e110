"""Manages the SQLite store holding raw per-frame records of experiment runs."""

from __future__ import annotations

import logging
import os
import sqlite3

logger = logging.getLogger(__name__)


class DatabaseManager:
    """Owns the connection and schema of one record store (in memory unless a path is given)."""

    MEMORY_PATH: str = ":memory:"
    SCHEMA_VERSION: int = 1

    ERROR_NO_CONNECTION: str = "record store is not open"

    def __init__(self, file_path: str | None = None) -> None:
        """Open (and create if needed) the record store."""
        self.conn: sqlite3.Connection | None = None
        self.file_path: str = file_path or self.MEMORY_PATH
        self._connect_to_database(self.file_path)
        self._initialize_schema()

    # ------------------------------------------------------------------
    # Properties
    # ------------------------------------------------------------------

    @property
    def is_open(self) -> bool:
        """Check if the store is currently open."""
        return self.conn is not None

    @property
    def is_in_memory(self) -> bool:
        return self.file_path == self.MEMORY_PATH

    # ------------------------------------------------------------------
    # Lifecycle
    # ------------------------------------------------------------------

    def commit(self) -> None:
        if self.conn is None:
            raise RuntimeError(self.ERROR_NO_CONNECTION)
        self.conn.commit()

    def close(self) -> None:
        """Commit and close the connection."""
        if self.conn:
            self.conn.commit()
            self.conn.close()
        self.conn = None

    def __enter__(self) -> DatabaseManager:
        return self

    def __exit__(self, *exc_info: object) -> None:
        self.close()

    # ------------------------------------------------------------------
    # Connection Management
    # ------------------------------------------------------------------

    def _connect_to_database(self, file_path: str) -> None:
        """Establish connection to the store with row access by name."""
        if file_path != self.MEMORY_PATH:
            directory: str = os.path.dirname(os.path.abspath(file_path))
            os.makedirs(directory, exist_ok=True)
        try:
            self.conn = sqlite3.connect(file_path)
        except sqlite3.Error as e:
            raise RuntimeError(f"Failed to open record store: {e}") from e

        self.conn.row_factory = sqlite3.Row
        self.conn.execute("PRAGMA foreign_keys = ON;")
        logger.debug("record store opened at %s", file_path)

    # ------------------------------------------------------------------
    # Schema Initialization
    # ------------------------------------------------------------------

    def _initialize_schema(self) -> None:
        """Create the tables if they are missing."""
        if self.conn is None:
            raise RuntimeError(self.ERROR_NO_CONNECTION)
        self.conn.executescript(self._get_schema_sql())
        self.conn.execute(f"PRAGMA user_version = {self.SCHEMA_VERSION}")
        self.conn.commit()

    @staticmethod
    def _get_schema_sql() -> str:
        """Get the complete record store schema as SQL."""
        return """
        CREATE TABLE IF NOT EXISTS Run (
            id INTEGER PRIMARY KEY AUTOINCREMENT,
            scenario TEXT NOT NULL,
            mode TEXT NOT NULL,
            offered_load_mbps REAL NOT NULL,
            seed INTEGER NOT NULL,
            window_start_us INTEGER NOT NULL,
            window_end_us INTEGER NOT NULL
        );

        CREATE TABLE IF NOT EXISTS Flow (
            run_id INTEGER NOT NULL,
            flow_id INTEGER NOT NULL,
            src_node TEXT NOT NULL,
            offered_load_mbps REAL NOT NULL,
            PRIMARY KEY (run_id, flow_id),
            FOREIGN KEY(run_id) REFERENCES Run(id) ON DELETE CASCADE
        );

        CREATE TABLE IF NOT EXISTS FrameRecord (
            run_id INTEGER NOT NULL,
            flow_id INTEGER NOT NULL,
            seq INTEGER NOT NULL,
            src_node TEXT NOT NULL,
            created_us INTEGER NOT NULL,
            delivered_us INTEGER,
            dropped INTEGER NOT NULL DEFAULT 0,
            hops INTEGER NOT NULL DEFAULT 0,
            octets INTEGER NOT NULL DEFAULT 0,
            PRIMARY KEY (run_id, flow_id, seq),
            FOREIGN KEY(run_id) REFERENCES Run(id) ON DELETE CASCADE
        );
        """
