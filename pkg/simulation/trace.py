"""Event trace: one tab-separated line per event."""

from __future__ import annotations

from collections.abc import Iterator
from pathlib import Path

TraceRow = tuple[int, str, str, str, str, str]


class EventTrace:
    """Collects (time_us, kind, node, nic, channel, frame_id) rows."""

    EMPTY: str = "-"

    def __init__(self, enabled: bool = True) -> None:
        self.enabled: bool = enabled
        self.rows: list[TraceRow] = []

    def record(
        self,
        time_us: int,
        kind: str,
        node: str,
        nic: str | None = None,
        channel: int | None = None,
        frame_id: str | None = None,
    ) -> None:
        if not self.enabled:
            return
        self.rows.append(
            (
                time_us,
                kind,
                node,
                nic or self.EMPTY,
                self.EMPTY if channel is None else str(channel),
                frame_id or self.EMPTY,
            )
        )

    def lines(self) -> Iterator[str]:
        for row in self.rows:
            yield "\t".join(str(column) for column in row)

    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines())

    def dump(self, path: str | Path) -> None:
        """Write the trace with a header line."""
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write("time_us\tkind\tnode\tnic\tchannel\tframe_id\n")
            handle.write(self.text())

    def count(self, kind: str | None = None, frame_prefix: str | None = None) -> int:
        """Rows matching a kind and/or a frame id prefix."""
        return sum(
            1
            for row in self.rows
            if (kind is None or row[1] == kind)
            and (frame_prefix is None or row[5].startswith(frame_prefix))
        )
