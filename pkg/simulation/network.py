"""Discrete-event simulation of a whole mesh: topology agents, data plane and medium."""

from __future__ import annotations

import itertools
import logging
import struct
from collections import Counter
from dataclasses import dataclass

import numpy as np

from channels.gw_selection import gw_select_channel
from codec.beacon_codec import BeaconCodec
from codec.eo11_codec import Eo11Codec
from codec.tr_codec import TrCodec
from forwarding.data_plane import DataPlane, FrameMeta
from models.frames import EthernetFrame, Eo11Frame, TrMessage
from models.metrics import FrameRecord, NodeSummary
from models.nic import NicMode, NicRole, NicState
from models.node_state import NodeState
from models.scenario_config import FlowSpec, HostKind, Mode, ScenarioConfig
from simulation.airtime import airtime_us
from simulation.conflict_graph import ConflictGraph
from simulation.event_queue import EventQueue, SimEvent, SimEventKind
from simulation.medium import AirFrame, AirFrameKind, Medium, Transmitter
from simulation.trace import EventTrace
from topology.dual_radio_agent import BeaconOutcome, DualRadioAgent
from topology.tr_agent import BaselineTrAgent
from utils.errors import ConsistencyError, DecodeError
from utils.mac_formatter import MacFormatter

logger = logging.getLogger(__name__)


@dataclass
class _FlowState:
    spec: FlowSpec
    first_us: int
    stop_us: int


class NetworkSimulator:
    """Runs one scenario under one seed; identical inputs give identical traces."""

    # ------------------------------------------------------------------
    # Constants
    # ------------------------------------------------------------------

    HOST_LABEL: str = "host"
    STAMP: struct.Struct = struct.Struct(">IIQ")
    UDP_IP_OVERHEAD: int = 28
    START_JITTER_US: int = 1000
    WATCHDOG_GRACE_US: int = 1000
    TU_US: int = 1024

    # ------------------------------------------------------------------
    # Initialization
    # ------------------------------------------------------------------

    def __init__(
        self,
        config: ScenarioConfig,
        seed: int | None = None,
        trace: bool = False,
        keep_log: bool = False,
    ) -> None:
        """Build the network; nothing runs until ``run_until``."""
        self.config: ScenarioConfig = config
        self.constants = config.constants
        self.seed: int = config.seed if seed is None else seed
        self.rng: np.random.Generator = np.random.default_rng(self.seed)
        self.dual: bool = config.mode is Mode.DUAL

        self.graph: ConflictGraph = ConflictGraph(
            config.adjacency(), self.constants.interference_hops
        )
        self.medium: Medium = Medium(self.graph, self.constants.queue_depth, keep_log)
        self.queue: EventQueue = EventQueue()
        self.trace: EventTrace = EventTrace(trace)
        self.now_us: int = 0

        self.order: dict[str, int] = {spec.node_id: index for index, spec in enumerate(config.nodes)}
        self.specs = {spec.node_id: spec for spec in config.nodes}
        self._rssi: dict[frozenset[str], float] = {
            frozenset((edge.a, edge.b)): edge.rssi for edge in config.edges
        }
        self.mac_to_id: dict[bytes, str] = {spec.mac: spec.node_id for spec in config.nodes}
        self.host_macs: dict[str, bytes] = {
            spec.node_id: MacFormatter.host_mac(index + 1) for index, spec in enumerate(config.nodes)
        }
        self.gw_id: str = config.gw.node_id
        self.gw_channel: int = gw_select_channel(config.plan, config.gw_channel, band=config.gw_band)

        self.agent = DualRadioAgent(
            config.plan,
            self.constants.candidate_expiry_us,
            self._orphan_hold_down_us(),
        )
        self.tr_agent = BaselineTrAgent(config.plan, self.gw_channel, names=self.mac_to_id)
        self.data_plane = DataPlane(self)

        self.nodes: dict[str, NodeState] = {}
        self.alive: dict[str, bool] = {spec.node_id: False for spec in config.nodes}
        self._beacon_gen: Counter[str] = Counter()
        self._watch_token: Counter[str] = Counter()
        self._frame_ids = itertools.count(1)

        self.records: dict[tuple[int, int], FrameRecord] = {}
        self._outstanding: Counter[tuple[int, int]] = Counter()
        self._flows: dict[int, _FlowState] = {}
        self.drop_reasons: Counter[str] = Counter()
        self.host_rx: Counter[str] = Counter()
        self.beacon_starts: dict[str, list[int]] = {}
        self.parent_losses: list[tuple[int, str, str | None]] = []
        self.traffic_window: tuple[int, int] | None = None

        for spec in config.nodes:
            self._schedule(0, SimEventKind.NODE_UP, spec.node_id)
        for event in config.events:
            kind = SimEventKind.NODE_DOWN if event.action == "down" else SimEventKind.NODE_UP
            self._schedule(event.time_us, kind, event.node_id)

    def _orphan_hold_down_us(self) -> int:
        """Long enough for any stale subtree to stop beaconing and expire."""
        per_level: int = (self.constants.beacon_loss_threshold + 1) * self.constants.beacon_interval_us
        return per_level * len(self.config.nodes) + self.constants.candidate_expiry_us

    # ------------------------------------------------------------------
    # Event Loop
    # ------------------------------------------------------------------

    def run_until(self, end_us: int) -> None:
        """Process every event up to and including ``end_us``."""
        while self.queue:
            next_time: int | None = self.queue.peek_time()
            if next_time is None or next_time > end_us:
                break
            event: SimEvent = self.queue.pop()
            self.now_us = event.time_us
            self._dispatch(event)

            upcoming: int | None = self.queue.peek_time()
            if upcoming is None or upcoming > self.now_us:
                self._arbitrate()
        self.now_us = max(self.now_us, end_us)

    def _schedule(self, time_us: int, kind: SimEventKind, node_id: str, payload: object = None) -> None:
        self.queue.push(time_us, kind, node_id, self.order.get(node_id, len(self.order)), payload)

    def _dispatch(self, event: SimEvent) -> None:
        handlers = {
            SimEventKind.NODE_UP: self._on_node_up,
            SimEventKind.NODE_DOWN: self._on_node_down,
            SimEventKind.TX_END: self._on_tx_end,
            SimEventKind.DELIVER: self._on_deliver,
            SimEventKind.STATION_LOST: self._on_station_lost,
            SimEventKind.PARENT_CHECK: self._on_parent_check,
            SimEventKind.ASSOC_COMPLETE: self._on_assoc_complete,
            SimEventKind.SCAN_DONE: self._on_scan_done,
            SimEventKind.BEACON_DUE: self._on_beacon_due,
            SimEventKind.TR_DUE: self._on_tr_due,
            SimEventKind.APP_ARRIVAL: self._on_app_arrival,
        }
        handlers[event.kind](event)

    def _arbitrate(self) -> None:
        for transmitter, frame, end_us in self.medium.start_ready(self.now_us, self._channel_of):
            channel = self._channel_of(transmitter)
            self.trace.record(
                self.now_us, SimEventKind.TX_START.label, transmitter.node_id,
                transmitter.label, channel, frame.label,
            )
            if frame.kind is AirFrameKind.BEACON:
                self.beacon_starts.setdefault(transmitter.node_id, []).append(self.now_us)
            self._schedule(end_us, SimEventKind.TX_END, transmitter.node_id, transmitter)

    def _channel_of(self, transmitter: Transmitter) -> int | None:
        """Channel the transmitter currently sends on; None keeps it off the air."""
        node: NodeState | None = self.nodes.get(transmitter.node_id)
        if node is None or not self.alive[transmitter.node_id]:
            return None
        if transmitter.label == NicRole.UP.value:
            return node.up_nic.channel if node.up_nic.mode is NicMode.ASSOCIATED else None
        if transmitter.label in (NicRole.DOWN.value, self.HOST_LABEL):
            return node.down_nic.channel
        return node.up_nic.channel

    # ------------------------------------------------------------------
    # Node Lifecycle
    # ------------------------------------------------------------------

    def _on_node_up(self, event: SimEvent) -> None:
        node_id: str = event.node
        spec = self.specs[node_id]
        node = NodeState.create(
            node_id,
            spec.mac,
            spec.is_gw,
            dual_radio=self.dual,
            bridge_aging_us=self.constants.bridge_aging_us,
        )
        self.nodes[node_id] = node
        self.alive[node_id] = True
        self._beacon_gen[node_id] += 1
        self._watch_token[node_id] += 1
        self.trace.record(self.now_us, event.kind.label, node_id)

        if self.dual:
            if node.is_gw:
                self.agent.bring_up_gw(node, self.gw_channel)
                self._start_beaconing(node)
            else:
                node.up_nic.mode = NicMode.SCANNING
        else:
            self.tr_agent.bring_up(node)
            if node.is_gw:
                self._schedule(self.now_us + self._jitter(), SimEventKind.TR_DUE, node_id)

    def _on_node_down(self, event: SimEvent) -> None:
        node_id: str = event.node
        if not self.alive[node_id]:
            return
        node: NodeState = self.nodes[node_id]
        self.alive[node_id] = False
        self._beacon_gen[node_id] += 1
        self._watch_token[node_id] += 1
        self.trace.record(self.now_us, event.kind.label, node_id)
        logger.info("%s: down at %d us", node_id, self.now_us)

        for transmitter in self._transmitters_of(node_id):
            for frame in self.medium.flush(transmitter):
                self._copy_finished(frame.meta)
                if frame.meta is not None:
                    self.drop_reasons["node-down"] += 1

        if node.parent_mac is not None:
            parent_id: str | None = self.mac_to_id.get(node.parent_mac)
            if parent_id is not None:
                self._schedule(
                    self.now_us + self._loss_timeout_us(),
                    SimEventKind.STATION_LOST,
                    parent_id,
                    node.mac,
                )

    def _on_station_lost(self, event: SimEvent) -> None:
        parent_id: str = event.node
        child_mac: bytes = event.payload
        if not self.alive[parent_id]:
            return
        child_id: str | None = self.mac_to_id.get(child_mac)
        parent: NodeState = self.nodes[parent_id]
        if child_id is not None and self.alive[child_id]:
            if self.nodes[child_id].parent_mac == parent.mac:
                return
        self.trace.record(self.now_us, event.kind.label, parent_id)
        if self.dual:
            self.agent.on_station_lost(parent, child_mac)
        else:
            self.tr_agent.forget_child(parent, child_mac)

    def _transmitters_of(self, node_id: str) -> list[Transmitter]:
        return [tx for (owner, _), tx in self.medium.transmitters.items() if owner == node_id]

    def _loss_timeout_us(self) -> int:
        period: int = self.constants.beacon_interval_us if self.dual else self.constants.tr_period_us
        return self.constants.beacon_loss_threshold * period

    def _jitter(self) -> int:
        return int(self.rng.integers(0, self.START_JITTER_US))

    # ------------------------------------------------------------------
    # Beacons and Join
    # ------------------------------------------------------------------

    def _start_beaconing(self, node: NodeState) -> None:
        self._beacon_gen[node.node_id] += 1
        self._schedule(
            self.now_us + self._jitter(),
            SimEventKind.BEACON_DUE,
            node.node_id,
            self._beacon_gen[node.node_id],
        )

    def _on_beacon_due(self, event: SimEvent) -> None:
        node_id: str = event.node
        if event.payload != self._beacon_gen[node_id] or not self.alive[node_id]:
            return
        node: NodeState = self.nodes[node_id]
        if not (node.is_gw or node.is_beaconing):
            return

        self.trace.record(self.now_us, event.kind.label, node_id, node.down_nic.role.value, node.down_nic.channel)
        beacon = self.agent.make_beacon(node, timestamp=self.now_us)
        interval_tu: int = min(0xFFFF, max(1, round(self.constants.beacon_interval_us / self.TU_US)))
        body: bytes = BeaconCodec.encode(beacon, interval_tu)
        self._enqueue(node, node.down_nic.role.value, AirFrameKind.BEACON, body, None, None)

        self._schedule(
            event.time_us + self.constants.beacon_interval_us,
            SimEventKind.BEACON_DUE,
            node_id,
            event.payload,
        )

    def _on_beacon_heard(self, node: NodeState, frame: AirFrame, sender_id: str) -> None:
        sender_mac: bytes = self.specs[sender_id].mac
        try:
            beacon = BeaconCodec.decode(frame.data, sender_mac)
        except DecodeError:
            return

        rssi: float = self._rssi.get(frozenset((sender_id, node.node_id)), ScenarioConfig.DEFAULT_RSSI)
        outcome = self.agent.on_beacon(node, beacon, rssi, self.now_us, sender_id)

        if outcome is BeaconOutcome.PARENT:
            self._arm_watchdog(node, self.constants.beacon_interval_us)
        elif outcome is BeaconOutcome.CANDIDATE and self._is_scanning(node) and not node.scan_pending:
            node.scan_pending = True
            self._schedule(
                self.now_us + self.constants.beacon_interval_us + self.constants.scan_slack_us,
                SimEventKind.SCAN_DONE,
                node.node_id,
            )

    @staticmethod
    def _is_scanning(node: NodeState) -> bool:
        return not node.is_gw and node.parent_mac is None and node.pending_parent is None

    def _on_scan_done(self, event: SimEvent) -> None:
        node_id: str = event.node
        if not self.alive[node_id]:
            return
        node: NodeState = self.nodes[node_id]
        node.scan_pending = False
        if not self._is_scanning(node):
            return

        parent = self.agent.choose_parent(node, self.now_us)
        self.trace.record(self.now_us, event.kind.label, node_id, NicRole.UP.value)
        if parent is None:
            if node.orphan_depth is not None and node.candidate_parents:
                # held-down candidates become eligible later
                node.scan_pending = True
                self._schedule(
                    self.now_us + self.constants.beacon_interval_us,
                    SimEventKind.SCAN_DONE,
                    node_id,
                )
            return

        self.agent.begin_join(node, parent)
        self._schedule(
            self.now_us + self.constants.association_latency_us,
            SimEventKind.ASSOC_COMPLETE,
            node_id,
            parent.bssid,
        )

    def _on_assoc_complete(self, event: SimEvent) -> None:
        node_id: str = event.node
        if not self.alive[node_id]:
            return
        node: NodeState = self.nodes[node_id]
        pending = node.pending_parent
        if pending is None or pending.bssid != event.payload:
            return

        parent_id: str | None = self.mac_to_id.get(pending.bssid)
        parent: NodeState | None = self.nodes.get(parent_id) if parent_id else None
        accepted: bool = (
            parent is not None
            and self.alive[parent.node_id]
            and (parent.is_gw or parent.is_beaconing)
            and parent.down_nic.channel == pending.tx_channel
        )

        if not accepted:
            self.agent.abort_join(node)
            if node.candidate_parents:
                node.scan_pending = True
                self._schedule(self.now_us, SimEventKind.SCAN_DONE, node_id)
            return

        assert parent is not None
        self.agent.complete_join(node, self.now_us)
        self.agent.on_station_associated(parent, node.mac)
        self.trace.record(self.now_us, event.kind.label, node_id, NicRole.UP.value, node.up_nic.channel)
        self._arm_watchdog(node, self.constants.beacon_interval_us)
        self._start_beaconing(node)

    # ------------------------------------------------------------------
    # Parent Watchdog
    # ------------------------------------------------------------------

    def _arm_watchdog(self, node: NodeState, period_us: int) -> None:
        self._watch_token[node.node_id] += 1
        self._schedule(
            self.now_us + period_us + self.WATCHDOG_GRACE_US,
            SimEventKind.PARENT_CHECK,
            node.node_id,
            (self._watch_token[node.node_id], period_us),
        )

    def _on_parent_check(self, event: SimEvent) -> None:
        node_id: str = event.node
        token, period_us = event.payload
        if token != self._watch_token[node_id] or not self.alive[node_id]:
            return
        node: NodeState = self.nodes[node_id]
        if node.parent_mac is None:
            return

        if not self.agent.record_missed_beacon(node, self.constants.beacon_loss_threshold):
            self._schedule(self.now_us + period_us, SimEventKind.PARENT_CHECK, node_id, event.payload)
            return

        self.trace.record(self.now_us, event.kind.label, node_id, node.up_nic.role.value, node.up_nic.channel)
        if self.dual:
            for frame in self.medium.flush(self.medium.transmitter(node_id, NicRole.UP.value, self.order[node_id])):
                self._copy_finished(frame.meta)
                if frame.meta is not None:
                    self.drop_reasons["parent-lost"] += 1
            lost = self.agent.on_parent_lost(node, self.now_us)
            self._beacon_gen[node_id] += 1
            node.scan_pending = True
            self._schedule(
                self.now_us + self.constants.beacon_interval_us + self.constants.scan_slack_us,
                SimEventKind.SCAN_DONE,
                node_id,
            )
        else:
            lost = self.tr_agent.on_parent_lost(node)
        self.parent_losses.append((self.now_us, node_id, self.mac_to_id.get(lost) if lost else None))

    # ------------------------------------------------------------------
    # Baseline TR
    # ------------------------------------------------------------------

    def _on_tr_due(self, event: SimEvent) -> None:
        node_id: str = event.node
        if not self.alive[node_id]:
            return
        gw: NodeState = self.nodes[node_id]
        self.trace.record(self.now_us, event.kind.label, node_id, gw.up_nic.role.value, gw.up_nic.channel)
        self._send_tr(gw, self.tr_agent.gw_emit_tr(gw))
        self._schedule(event.time_us + self.constants.tr_period_us, SimEventKind.TR_DUE, node_id)

    def _send_tr(self, node: NodeState, tr: TrMessage) -> None:
        self._enqueue(node, node.up_nic.role.value, AirFrameKind.TR, TrCodec.encode(tr), None, None)

    def _on_tr_heard(self, node: NodeState, frame: AirFrame) -> None:
        try:
            tr = TrCodec.decode(frame.data)
        except DecodeError:
            return
        outcome = self.tr_agent.baseline_on_tr(node, tr, self.now_us)
        if outcome.forward is not None:
            self._arm_watchdog(node, self.constants.tr_period_us)
            self._send_tr(node, outcome.forward)

    # ------------------------------------------------------------------
    # Air
    # ------------------------------------------------------------------

    def _enqueue(
        self,
        node: NodeState,
        label: str,
        kind: AirFrameKind,
        data: bytes,
        receiver: str | None,
        meta: FrameMeta | None,
        airtime_octets: int | None = None,
    ) -> bool:
        octets: int = len(data) if airtime_octets is None else airtime_octets
        frame = AirFrame(
            frame_id=next(self._frame_ids),
            kind=kind,
            data=data,
            receiver=receiver,
            airtime_us=airtime_us(octets, self.constants.airtime),
            enqueued_us=self.now_us,
            meta=meta,
        )
        transmitter = self.medium.transmitter(node.node_id, label, self.order[node.node_id])
        if not self.medium.enqueue(transmitter, frame):
            return False
        if meta is not None and meta.flow_id is not None:
            self._outstanding[(meta.flow_id, meta.seq or 0)] += 1
        return True

    def _on_tx_end(self, event: SimEvent) -> None:
        transmitter: Transmitter = event.payload
        transmission, frame = self.medium.finish(transmitter, self.now_us)
        self.trace.record(
            self.now_us, event.kind.label, transmitter.node_id, transmitter.label,
            transmission.channel, frame.label,
        )

        if frame.receiver is None:
            for neighbor in sorted(self.graph.neighbors.get(transmitter.node_id, ()), key=self.order.__getitem__):
                if self.alive[neighbor]:
                    self._schedule(self.now_us, SimEventKind.DELIVER, neighbor, (frame, transmitter.node_id))
        else:
            self._schedule(self.now_us, SimEventKind.DELIVER, frame.receiver, (frame, transmitter.node_id))

    def _on_deliver(self, event: SimEvent) -> None:
        node_id: str = event.node
        frame, sender_id = event.payload
        if frame.kind not in (AirFrameKind.BEACON, AirFrameKind.TR):
            self._copy_finished(frame.meta)

        if not self.alive[node_id]:
            if frame.meta is not None:
                self.drop_reasons["receiver-down"] += 1
            return

        node: NodeState = self.nodes[node_id]
        self.trace.record(self.now_us, event.kind.label, node_id, None, None, frame.label)

        if frame.kind is AirFrameKind.BEACON:
            self._on_beacon_heard(node, frame, sender_id)
        elif frame.kind is AirFrameKind.TR:
            self._on_tr_heard(node, frame)
        elif frame.kind is AirFrameKind.DATA:
            assert frame.meta is not None
            self.data_plane.receive_octets(node, frame.data, frame.meta, self.now_us)
        elif frame.kind is AirFrameKind.HOST_UP:
            assert frame.meta is not None
            inner = Eo11Codec.decode_ethernet(frame.data)
            self.data_plane.originate(node, inner, frame.meta, self.now_us)
        else:
            assert frame.meta is not None
            self._host_received(node, Eo11Codec.decode_ethernet(frame.data), frame.meta)

    def _copy_finished(self, meta: FrameMeta | None) -> None:
        if meta is None or meta.flow_id is None:
            return
        key = (meta.flow_id, meta.seq or 0)
        self._outstanding[key] -= 1

    # ------------------------------------------------------------------
    # FrameSink
    # ------------------------------------------------------------------

    def transmit(self, node: NodeState, nic: NicState, data: bytes, meta: FrameMeta) -> bool:
        """Queue an Eo11 frame on ``nic`` towards the node named by its outer destination."""
        receiver: str | None = self.mac_to_id.get(bytes(data[:6]))
        if receiver is None:
            raise ConsistencyError(f"{node.node_id}: Eo11 frame to unknown MAC")
        return self._enqueue(
            node,
            nic.role.value,
            AirFrameKind.DATA,
            data,
            receiver,
            meta,
            airtime_octets=len(data) - Eo11Frame.HEADER_LENGTH,
        )

    def deliver_local(self, node: NodeState, frame: EthernetFrame, meta: FrameMeta) -> None:
        """Up to the host behind the node, over the air when the host is wireless."""
        if node.is_gw or self.specs[node.node_id].host is HostKind.WIRED:
            self._host_received(node, frame, meta)
            return

        data: bytes = Eo11Codec.encode_ethernet(frame)
        if not self._enqueue(
            node, node.down_nic.role.value, AirFrameKind.HOST_DOWN, data, node.node_id, meta
        ):
            self.frame_dropped(node, meta, DataPlane.DROP_QUEUE_FULL)

    def frame_dropped(self, node: NodeState, meta: FrameMeta, reason: str) -> None:
        """Tally the reason; the frame record settles as dropped when no copy survives."""
        self.drop_reasons[reason] += 1
        logger.debug("%s: frame %d dropped (%s)", node.node_id, meta.frame_id, reason)

    def _host_received(self, node: NodeState, frame: EthernetFrame, meta: FrameMeta) -> None:
        self.host_rx[node.node_id] += 1
        if not (node.is_gw and frame.dst == MacFormatter.INFRASTRUCTURE_HOST):
            return
        if meta.flow_id is None:
            return
        record: FrameRecord | None = self.records.get((meta.flow_id, meta.seq or 0))
        if record is not None and record.delivered_us is None:
            record.delivered_us = self.now_us
            record.hops = max(len(meta.path) - 1, 0)

    # ------------------------------------------------------------------
    # Traffic
    # ------------------------------------------------------------------

    def start_traffic(self, at_us: int, duration_us: int) -> tuple[int, int]:
        """Announce the infrastructure host at ``at_us`` and start the flows after a delay.

        Returns the traffic window (start, end) in which metrics are taken.
        """
        self._schedule(at_us, SimEventKind.APP_ARRIVAL, self.gw_id, None)

        window_start: int = at_us + self.constants.traffic_start_delay_us
        window_end: int = window_start + duration_us
        self.traffic_window = (window_start, window_end)

        for flow in self.config.flows:
            if flow.rate_mbps <= 0:
                continue
            interval: float = flow.interval_us
            phase: float = float(self.rng.uniform(0.0, interval))
            first: int = window_start + round(flow.start_s * 1_000_000 + phase)
            stop: int = window_end
            if flow.stop_s is not None:
                stop = min(stop, window_start + round(flow.stop_s * 1_000_000))
            self._flows[flow.flow_id] = _FlowState(flow, first, stop)
            if first < stop:
                self._schedule(first, SimEventKind.APP_ARRIVAL, flow.src_node, (flow.flow_id, 0))
        return self.traffic_window

    def _on_app_arrival(self, event: SimEvent) -> None:
        if event.payload is None:
            self._announce_infrastructure_host()
            return

        flow_id, seq = event.payload
        state: _FlowState = self._flows[flow_id]
        flow: FlowSpec = state.spec
        node_id: str = flow.src_node

        next_time: int = state.first_us + round((seq + 1) * flow.interval_us)
        if next_time < state.stop_us:
            self._schedule(next_time, SimEventKind.APP_ARRIVAL, node_id, (flow_id, seq + 1))

        self.records[(flow_id, seq)] = FrameRecord(flow_id, seq, node_id, self.now_us, octets=flow.packet_size)
        meta = FrameMeta(next(self._frame_ids), flow_id, seq, self.now_us)
        self.trace.record(self.now_us, event.kind.label, node_id, None, None, f"data-{meta.frame_id}")
        if not self.alive[node_id]:
            self.drop_reasons["source-down"] += 1
            return

        node: NodeState = self.nodes[node_id]
        payload: bytes = self.STAMP.pack(flow_id, seq, self.now_us).ljust(
            flow.packet_size + self.UDP_IP_OVERHEAD, b"\x00"
        )
        inner = EthernetFrame(
            dst=MacFormatter.INFRASTRUCTURE_HOST,
            src=self.host_macs[node_id],
            ethertype=EthernetFrame.ETHERTYPE_IPV4,
            payload=payload,
        )

        if self.specs[node_id].host is HostKind.WIRELESS and not node.is_gw:
            data: bytes = Eo11Codec.encode_ethernet(inner)
            if not self._enqueue(node, self.HOST_LABEL, AirFrameKind.HOST_UP, data, node_id, meta):
                self.frame_dropped(node, meta, DataPlane.DROP_QUEUE_FULL)
            return

        self.data_plane.originate(node, inner, meta, self.now_us)

    def _announce_infrastructure_host(self) -> None:
        """One broadcast from the GW-side host so every bridge learns where it lives."""
        if not self.alive[self.gw_id]:
            return
        gw: NodeState = self.nodes[self.gw_id]
        frame = EthernetFrame(
            dst=MacFormatter.BROADCAST,
            src=MacFormatter.INFRASTRUCTURE_HOST,
            ethertype=EthernetFrame.ETHERTYPE_ARP,
            payload=bytes(self.UDP_IP_OVERHEAD),
        )
        meta = FrameMeta(next(self._frame_ids), created_us=self.now_us)
        self.trace.record(self.now_us, SimEventKind.APP_ARRIVAL.label, self.gw_id, None, None, f"data-{meta.frame_id}")
        self.data_plane.originate(gw, frame, meta, self.now_us)

    # ------------------------------------------------------------------
    # Results
    # ------------------------------------------------------------------

    def finalize_records(self) -> list[FrameRecord]:
        """Records in (flow, seq) order; undelivered packets with no copy left count as dropped."""
        records: list[FrameRecord] = []
        for key in sorted(self.records):
            record = self.records[key]
            record.dropped = record.delivered_us is None and self._outstanding[key] <= 0
            records.append(record)
        return records

    def is_queued(self, record: FrameRecord) -> bool:
        """Still waiting somewhere in the network at the end of the run."""
        return record.delivered_us is None and self._outstanding[(record.flow_id, record.seq)] > 0

    def all_attached(self) -> bool:
        """Every live node holds a place in the tree."""
        return all(node.is_attached for node_id, node in self.nodes.items() if self.alive[node_id])

    def topology_signature(self) -> tuple:
        """Changes whenever any node's tree position or channels change."""
        rows: list[tuple] = []
        for spec in self.config.nodes:
            node: NodeState | None = self.nodes.get(spec.node_id)
            if node is None:
                rows.append((spec.node_id, False))
                continue
            rows.append(
                (
                    spec.node_id,
                    self.alive[spec.node_id],
                    node.parent_id,
                    node.depth,
                    node.up_nic.channel,
                    node.down_nic.channel,
                    tuple(sorted(node.children)),
                )
            )
        return tuple(rows)

    def node_summaries(self) -> list[NodeSummary]:
        """Tree position, channels and counters of every node in scenario order."""
        summaries: list[NodeSummary] = []
        for spec in self.config.nodes:
            node: NodeState | None = self.nodes.get(spec.node_id)
            if node is None:
                summaries.append(NodeSummary(spec.node_id, None, None, None, None))
                continue
            up_channel: int | None = None if node.is_gw else node.up_nic.channel
            summaries.append(
                NodeSummary(
                    node_id=spec.node_id,
                    depth=node.depth,
                    parent=node.parent_id,
                    up_channel=up_channel,
                    down_channel=node.down_nic.channel,
                    rx=node.counters.rx,
                    tx=node.counters.tx,
                    relayed=node.counters.relayed,
                    flooded=node.counters.flooded,
                    dropped=node.counters.dropped,
                )
            )
        return summaries

    def check_tunnel_consistency(self) -> None:
        """Each live node's tunnels are exactly its parent plus its children."""
        for node_id, node in self.nodes.items():
            if not self.alive[node_id]:
                continue
            expected: set[bytes] = set(node.children)
            if node.parent_mac is not None:
                expected.add(node.parent_mac)
            if set(node.tunnels) != expected:
                raise ConsistencyError(f"{node_id}: tunnels disagree with associations")
