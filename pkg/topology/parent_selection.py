"""Shortest-path parent choice among heard beacons."""

from __future__ import annotations

from collections.abc import Iterable

from models.node_state import CandidateParent


def parent_sort_key(candidate: CandidateParent) -> tuple[int, float, bytes]:
    """Fewest hops first, then strongest signal, then lowest BSSID."""
    return (candidate.hops, -candidate.rssi, candidate.bssid)


def select_parent(candidates: Iterable[CandidateParent]) -> CandidateParent | None:
    """Best candidate, or None when nothing has been heard (the node keeps scanning)."""
    ordered: list[CandidateParent] = sorted(candidates, key=parent_sort_key)
    return ordered[0] if ordered else None
