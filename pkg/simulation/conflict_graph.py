"""Who interferes with whom: scenario adjacency plus a channel-aware conflict rule."""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass


@dataclass(frozen=True)
class Transmission:
    """One frame on the air; ``receiver`` None means broadcast."""

    sender: str
    receiver: str | None
    channel: int

    @property
    def endpoints(self) -> tuple[str, ...]:
        if self.receiver is None or self.receiver == self.sender:
            return (self.sender,)
        return (self.sender, self.receiver)


class ConflictGraph:
    """Adjacency with precomputed hop distances."""

    def __init__(self, adjacency: Mapping[str, Iterable[str]], interference_hops: int = 1) -> None:
        """Build from a symmetric neighbor map; ``interference_hops`` widens the range."""
        if interference_hops < 1:
            raise ValueError(f"interference_hops must be at least 1, got {interference_hops}")

        self.neighbors: dict[str, frozenset[str]] = {
            node: frozenset(peers) for node, peers in adjacency.items()
        }
        for node, peers in list(self.neighbors.items()):
            for peer in peers:
                self.neighbors.setdefault(peer, frozenset())
                if node not in self.neighbors[peer]:
                    self.neighbors[peer] = self.neighbors[peer] | {node}

        self.interference_hops: int = interference_hops
        self._distances: dict[str, dict[str, int]] = {
            node: self.bfs(node) for node in self.neighbors
        }

    def bfs(self, source: str) -> dict[str, int]:
        """Hop distance from ``source`` to every reachable node."""
        distances: dict[str, int] = {source: 0}
        frontier: deque[str] = deque([source])
        while frontier:
            node = frontier.popleft()
            for peer in sorted(self.neighbors.get(node, ())):
                if peer not in distances:
                    distances[peer] = distances[node] + 1
                    frontier.append(peer)
        return distances

    def distance(self, a: str, b: str) -> int | None:
        """Hops between two nodes, None when disconnected."""
        return self._distances.get(a, {}).get(b)

    def within_range(self, a: str, b: str) -> bool:
        """Equal, or no further apart than the interference range."""
        hops: int | None = self.distance(a, b)
        return hops is not None and hops <= self.interference_hops

    def is_connected(self) -> bool:
        if not self.neighbors:
            return True
        first: str = next(iter(self.neighbors))
        return len(self._distances[first]) == len(self.neighbors)


def conflicts(tx_a: Transmission, tx_b: Transmission, graph: ConflictGraph) -> bool:
    """Same channel and some endpoint of one within range of some endpoint of the other."""
    if tx_a.channel != tx_b.channel:
        return False
    return any(
        graph.within_range(a, b) for a in tx_a.endpoints for b in tx_b.endpoints
    )
