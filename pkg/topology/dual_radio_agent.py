"""Per-node topology state machine of the dual-radio mesh.

Unattached MAPs listen to beacons, keep the shortest-path candidate, associate
their UP-NIC to it and bring their DOWN-NIC up as an AP on a channel of the
other band chosen by weight reduction. No control frame other than the beacon
is ever sent.
"""

from __future__ import annotations

import logging
from enum import Enum

from channels.weight_reduction import apply_weight_reduction, assign_channel, candidate_channels
from models.channel_plan import Band, ChannelPlan
from models.frames import Beacon
from models.nic import NicMode, NicRole
from models.node_state import CandidateParent, NodeState
from topology.parent_selection import select_parent
from topology.tunnel_table import close_tunnel, open_tunnel
from utils.errors import ConsistencyError, ContractViolation
from utils.mac_formatter import MacFormatter

logger = logging.getLogger(__name__)


class BeaconOutcome(Enum):
    """What a heard beacon meant to the listener."""

    IGNORED = "ignored"
    CANDIDATE = "candidate"
    PARENT = "parent"


class DualRadioAgent:
    """Drives join, beaconing and tunnel lifecycle for every node of one run."""

    # ------------------------------------------------------------------
    # Constants
    # ------------------------------------------------------------------

    DEFAULT_CANDIDATE_EXPIRY_US: int = 300_000
    DEFAULT_ORPHAN_HOLD_DOWN_US: int = 3_000_000

    ERROR_GW_JOIN: str = "{node}: the GW never joins a parent"
    ERROR_ALREADY_ATTACHED: str = "{node}: already attached to {parent}"
    ERROR_UNATTACHED_IE: str = "{node}: unattached MAP has nothing to advertise"
    ERROR_PARENT_BAND: str = "{node}: parent channel {channel} is not in the plan"

    # ------------------------------------------------------------------
    # Initialization
    # ------------------------------------------------------------------

    def __init__(
        self,
        plan: ChannelPlan,
        candidate_expiry_us: int = DEFAULT_CANDIDATE_EXPIRY_US,
        orphan_hold_down_us: int = DEFAULT_ORPHAN_HOLD_DOWN_US,
    ) -> None:
        """Bind the agent to the run's channel plan."""
        self.plan: ChannelPlan = plan
        self.candidate_expiry_us: int = candidate_expiry_us
        self.orphan_hold_down_us: int = orphan_hold_down_us

    # ------------------------------------------------------------------
    # GW
    # ------------------------------------------------------------------

    def bring_up_gw(self, gw: NodeState, channel: int) -> None:
        """Start the GW's single NIC as an AP on ``channel``."""
        band: Band | None = self.plan.band_of(channel)
        if band is None:
            raise ContractViolation(f"GW channel {channel} is not in the plan")
        gw.up_nic.configure(band, channel, NicMode.AP_ACTIVE)
        gw.depth = NodeState.GW_DEPTH
        logger.info("%s: GW up on channel %d (%s GHz)", gw.node_id, channel, band.value)

    # ------------------------------------------------------------------
    # Beacon Listening
    # ------------------------------------------------------------------

    def on_beacon(
        self,
        node: NodeState,
        beacon: Beacon,
        rssi: float,
        now_us: int,
        sender_id: str | None = None,
    ) -> BeaconOutcome:
        """Record a decoded beacon as a candidate, or as a sign of life from the parent."""
        if node.is_gw or beacon.bssid == node.mac:
            return BeaconOutcome.IGNORED

        self.evict_stale(node, now_us)

        # own children advertise a longer path through this very node
        if beacon.bssid in node.children:
            return BeaconOutcome.IGNORED

        if node.parent_mac is not None and beacon.bssid == node.parent_mac:
            self._refresh_parent(node, beacon, now_us)
            return BeaconOutcome.PARENT

        node.candidate_parents[beacon.bssid] = CandidateParent(
            bssid=beacon.bssid,
            node_id=sender_id or MacFormatter.format(beacon.bssid),
            hops=beacon.hops,
            channel_list=tuple(beacon.channel_list),
            tx_channel=beacon.tx_channel,
            rssi=rssi,
            heard_at=now_us,
        )
        return BeaconOutcome.CANDIDATE

    def evict_stale(self, node: NodeState, now_us: int) -> int:
        """Forget candidates not heard within the expiry window."""
        stale: list[bytes] = [
            bssid
            for bssid, candidate in node.candidate_parents.items()
            if now_us - candidate.heard_at > self.candidate_expiry_us
        ]
        for bssid in stale:
            del node.candidate_parents[bssid]
        return len(stale)

    def _refresh_parent(self, node: NodeState, beacon: Beacon, now_us: int) -> None:
        """Reset the loss watchdog and follow depth changes upstream."""
        node.last_parent_heard_us = now_us
        node.missed_beacon_count = 0

        depth: int = beacon.hops + 1
        if depth != node.depth or tuple(beacon.channel_list) != node.parent_channel_list:
            logger.debug("%s: parent now at %d hops", node.node_id, beacon.hops)
            node.depth = depth
            node.parent_channel_list = tuple(beacon.channel_list)

    # ------------------------------------------------------------------
    # Join
    # ------------------------------------------------------------------

    def choose_parent(self, node: NodeState, now_us: int) -> CandidateParent | None:
        """Shortest-path candidate among the fresh, eligible ones."""
        self.evict_stale(node, now_us)
        return select_parent(
            candidate
            for candidate in node.candidate_parents.values()
            if self.is_eligible(node, candidate, now_us)
        )

    def is_eligible(self, node: NodeState, candidate: CandidateParent, now_us: int) -> bool:
        """An orphan only takes shallower parents until its old subtree has dissolved."""
        if node.orphan_depth is None or node.orphaned_at_us is None:
            return True
        if candidate.hops < node.orphan_depth:
            return True
        return now_us - node.orphaned_at_us >= self.orphan_hold_down_us

    def begin_join(self, node: NodeState, parent: CandidateParent) -> None:
        """Tune the UP-NIC to the parent's channel and start associating."""
        if node.is_gw:
            raise ContractViolation(self.ERROR_GW_JOIN.format(node=node.node_id))
        if node.parent_mac is not None:
            raise ContractViolation(
                self.ERROR_ALREADY_ATTACHED.format(
                    node=node.node_id, parent=MacFormatter.format(node.parent_mac)
                )
            )

        band: Band | None = self.plan.band_of(parent.tx_channel)
        if band is None:
            raise ContractViolation(
                self.ERROR_PARENT_BAND.format(node=node.node_id, channel=parent.tx_channel)
            )

        node.up_nic.configure(band, parent.tx_channel, NicMode.ASSOCIATING)
        node.pending_parent = parent
        node.scan_pending = False

    def complete_join(self, node: NodeState, now_us: int = 0) -> None:
        """Association confirmed: open the parent tunnel and bring the AP side up."""
        parent: CandidateParent | None = node.pending_parent
        if parent is None:
            raise ContractViolation(f"{node.node_id}: no association in progress")

        node.pending_parent = None
        node.parent_mac = parent.bssid
        node.parent_id = parent.node_id
        node.depth = parent.hops + 1
        node.parent_channel_list = tuple(parent.channel_list)
        node.missed_beacon_count = 0
        node.last_parent_heard_us = now_us
        node.up_nic.mode = NicMode.ASSOCIATED
        node.orphan_depth = None
        node.orphaned_at_us = None
        node.candidate_parents.pop(parent.bssid, None)

        open_tunnel(node, parent.bssid, NicRole.UP if not node.is_single_nic else NicRole.SINGLE)

        if not node.is_single_nic:
            self._bring_up_down_nic(node)

        logger.info(
            "%s: joined %s at depth %d (UP ch %s, DOWN ch %s)",
            node.node_id,
            parent.node_id,
            node.depth,
            node.up_nic.channel,
            node.down_nic.channel,
        )

    def abort_join(self, node: NodeState) -> CandidateParent | None:
        """Association failed: demote the candidate and go back to scanning."""
        parent: CandidateParent | None = node.pending_parent
        node.pending_parent = None
        node.up_nic.reset()
        node.up_nic.mode = NicMode.SCANNING
        if parent is not None:
            node.candidate_parents.pop(parent.bssid, None)
            logger.debug("%s: association with %s failed", node.node_id, parent.node_id)
        return parent

    def join(self, node: NodeState, parent: CandidateParent, now_us: int = 0) -> None:
        """Associate with ``parent`` in one step (zero association latency)."""
        self.begin_join(node, parent)
        self.complete_join(node, now_us)

    def _bring_up_down_nic(self, node: NodeState) -> None:
        """AP side on the weight-reduction channel; kept across re-joins unless the band clashes."""
        up_band: Band | None = node.up_nic.band
        assert up_band is not None and node.depth is not None

        down = node.down_nic
        if down.mode is NicMode.AP_ACTIVE and down.band is not up_band:
            return

        if down.mode is NicMode.AP_ACTIVE:
            logger.warning(
                "%s: new parent shares the DOWN band, reassigning channel %s",
                node.node_id,
                down.channel,
            )

        candidates: tuple[int, ...] = candidate_channels(up_band, self.plan)
        weights = apply_weight_reduction(node.depth, candidates, node.parent_channel_list)
        channel: int = assign_channel(weights, candidates)
        down.configure(up_band.opposite, channel, NicMode.AP_ACTIVE)

    # ------------------------------------------------------------------
    # Beacon Synthesis
    # ------------------------------------------------------------------

    def make_own_ie(self, node: NodeState) -> tuple[int, tuple[int, ...]]:
        """(hops, channel list) to advertise: the parent's list plus the UP-NIC channel."""
        if node.is_gw:
            return NodeState.GW_DEPTH, ()
        if not node.is_attached or node.depth is None or node.up_nic.channel is None:
            raise ContractViolation(self.ERROR_UNATTACHED_IE.format(node=node.node_id))
        return node.depth, node.parent_channel_list + (node.up_nic.channel,)

    def make_beacon(self, node: NodeState, timestamp: int = 0) -> Beacon:
        """Beacon sent on the node's AP-side channel."""
        hops, channel_list = self.make_own_ie(node)
        channel: int | None = node.down_nic.channel
        if channel is None:
            raise ConsistencyError(f"{node.node_id}: beaconing without an AP channel")
        return Beacon(
            bssid=node.mac,
            hops=hops,
            channel_list=channel_list,
            tx_channel=channel,
            timestamp=timestamp,
        )

    # ------------------------------------------------------------------
    # Station Events
    # ------------------------------------------------------------------

    def on_station_associated(self, parent: NodeState, child_mac: bytes) -> None:
        """A child joined the AP side: open the tunnel endpoint towards it."""
        if child_mac in parent.children:
            logger.debug(
                "%s: %s re-associated", parent.node_id, MacFormatter.format(child_mac)
            )
        parent.children.add(child_mac)
        nic: NicRole = NicRole.SINGLE if parent.is_single_nic else NicRole.DOWN
        open_tunnel(parent, child_mac, nic)

    def on_station_lost(self, parent: NodeState, child_mac: bytes) -> bool:
        """A child left: close its tunnel and purge what the bridge learned through it."""
        if child_mac not in parent.children:
            logger.warning(
                "%s: lost unknown station %s", parent.node_id, MacFormatter.format(child_mac)
            )
            return False
        parent.children.discard(child_mac)
        close_tunnel(parent, child_mac)
        return True

    # ------------------------------------------------------------------
    # Parent Loss
    # ------------------------------------------------------------------

    def record_missed_beacon(self, node: NodeState, threshold: int) -> bool:
        """Count one silent beacon interval; True once the parent is deemed lost."""
        if node.is_gw or node.parent_mac is None:
            return False
        node.missed_beacon_count += 1
        return node.missed_beacon_count >= threshold

    def on_parent_lost(self, node: NodeState, now_us: int = 0) -> bytes | None:
        """Tear the UP association down and go back to scanning; children stay served."""
        if node.is_gw:
            return None

        if node.depth is not None:
            node.orphan_depth = node.depth
            node.orphaned_at_us = now_us

        lost: bytes | None = node.parent_mac
        if lost is not None:
            close_tunnel(node, lost)
            node.candidate_parents.pop(lost, None)
            logger.info(
                "%s: parent %s lost after %d silent intervals",
                node.node_id,
                node.parent_id,
                node.missed_beacon_count,
            )

        node.parent_mac = None
        node.parent_id = None
        node.pending_parent = None
        node.depth = None
        node.parent_channel_list = ()
        node.missed_beacon_count = 0
        node.last_parent_heard_us = None
        node.up_nic.reset()
        node.up_nic.mode = NicMode.SCANNING
        return lost
