"""Topology Refresh handling of the single-radio baseline.

The GW floods a TR every period. Each MAP adopts the sender of the first TR
with the fewest hops as its parent and re-emits it with the hop count bumped,
itself as origin and its parent as parent address. A TR naming a node as
parent doubles as the child's registration there.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass

from models.channel_plan import Band, ChannelPlan
from models.frames import TrMessage
from models.nic import NicMode, NicRole
from models.node_state import NodeState
from topology.tunnel_table import close_tunnel, open_tunnel
from utils.errors import ContractViolation
from utils.mac_formatter import MacFormatter

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrOutcome:
    """Result of processing one TR."""

    forward: TrMessage | None = None
    adopted_parent: bool = False
    child_changed: bool = False


class BaselineTrAgent:
    """TR-driven tree creation and maintenance on one shared channel."""

    def __init__(
        self, plan: ChannelPlan, channel: int, names: Mapping[bytes, str] | None = None
    ) -> None:
        """Every NIC of the run sits on ``channel``; ``names`` maps MACs to node ids."""
        band: Band | None = plan.band_of(channel)
        if band is None:
            raise ContractViolation(f"baseline channel {channel} is not in the plan")
        self.plan: ChannelPlan = plan
        self.channel: int = channel
        self.band: Band = band
        self.names: dict[bytes, str] = dict(names or {})

    # ------------------------------------------------------------------
    # Bring-up
    # ------------------------------------------------------------------

    def bring_up(self, node: NodeState) -> None:
        """Tune the single NIC; the GW is attached from the start."""
        mode: NicMode = NicMode.AP_ACTIVE if node.is_gw else NicMode.SCANNING
        node.up_nic.configure(self.band, self.channel, mode)
        if node.is_gw:
            node.depth = NodeState.GW_DEPTH

    def gw_emit_tr(self, gw: NodeState) -> TrMessage:
        """The periodic TR originated by the GW."""
        if not gw.is_gw:
            raise ContractViolation(f"{gw.node_id}: only the GW originates TRs")
        return TrMessage(hops=NodeState.GW_DEPTH, parent_addr=gw.mac, origin_addr=gw.mac)

    # ------------------------------------------------------------------
    # TR Processing
    # ------------------------------------------------------------------

    def baseline_on_tr(self, node: NodeState, tr: TrMessage, now_us: int) -> TrOutcome:
        """Register children, choose or confirm the parent, and build the TR to forward."""
        child_changed: bool = self._track_child(node, tr)

        if node.is_gw or tr.origin_addr == node.mac:
            return TrOutcome(child_changed=child_changed)

        # a TR from our own subtree can only describe a path through us
        if tr.origin_addr in node.children:
            return TrOutcome(child_changed=child_changed)

        offered_depth: int = tr.hops + 1

        if node.depth is None or node.parent_mac is None:
            self._adopt(node, tr, now_us)
            return TrOutcome(self._forwarded(node), True, child_changed)

        if tr.hops >= node.depth:
            return TrOutcome(child_changed=child_changed)

        if offered_depth < node.depth:
            close_tunnel(node, node.parent_mac)
            self._adopt(node, tr, now_us)
            return TrOutcome(self._forwarded(node), True, child_changed)

        if tr.origin_addr == node.parent_mac:
            node.last_parent_heard_us = now_us
            node.missed_beacon_count = 0
            return TrOutcome(self._forwarded(node), False, child_changed)

        return TrOutcome(child_changed=child_changed)

    def on_parent_lost(self, node: NodeState) -> bytes | None:
        """No TR from the parent for too long: detach and wait for any TR."""
        lost: bytes | None = node.parent_mac
        if lost is not None:
            close_tunnel(node, lost)
            logger.info("%s: baseline parent %s lost", node.node_id, node.parent_id)
        node.parent_mac = None
        node.parent_id = None
        node.depth = None
        node.missed_beacon_count = 0
        node.last_parent_heard_us = None
        node.up_nic.mode = NicMode.SCANNING
        return lost

    def forget_child(self, node: NodeState, child_mac: bytes) -> bool:
        """Drop a child that went silent."""
        if child_mac not in node.children:
            return False
        node.children.discard(child_mac)
        close_tunnel(node, child_mac)
        return True

    # ------------------------------------------------------------------
    # Helpers
    # ------------------------------------------------------------------

    def _track_child(self, node: NodeState, tr: TrMessage) -> bool:
        """Children announce themselves by naming us as their parent."""
        child: bytes = tr.origin_addr
        if child == node.mac:
            return False

        if tr.parent_addr == node.mac:
            if child in node.children:
                return False
            node.children.add(child)
            open_tunnel(node, child, NicRole.SINGLE)
            logger.debug("%s: child %s registered", node.node_id, MacFormatter.format(child))
            return True

        if child in node.children:
            return self.forget_child(node, child)
        return False

    def _adopt(self, node: NodeState, tr: TrMessage, now_us: int) -> None:
        node.parent_mac = tr.origin_addr
        node.parent_id = self.names.get(tr.origin_addr, MacFormatter.format(tr.origin_addr))
        node.depth = tr.hops + 1
        node.missed_beacon_count = 0
        node.last_parent_heard_us = now_us
        node.up_nic.mode = NicMode.ASSOCIATED
        open_tunnel(node, tr.origin_addr, NicRole.SINGLE)
        logger.debug("%s: adopted %s at depth %d", node.node_id, node.parent_id, node.depth)

    @staticmethod
    def _forwarded(node: NodeState) -> TrMessage:
        assert node.depth is not None and node.parent_mac is not None
        return TrMessage(hops=node.depth, parent_addr=node.parent_mac, origin_addr=node.mac)
