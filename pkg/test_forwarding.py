"""Data plane tests: learning bridge, NIC selection and delivery over Eo11 trees."""

from __future__ import annotations

import itertools
from collections import deque

import pytest

from codec import Eo11Codec
from forwarding import BridgeTable, DataPlane, FrameMeta
from models.frames import EthernetFrame
from models.nic import NicRole
from models.node_state import NodeState
from topology import open_tunnel
from utils.errors import ConsistencyError
from utils.mac_formatter import MacFormatter

INFRA = MacFormatter.INFRASTRUCTURE_HOST


class RecordingSink:
    """Frame sink that queues octets for hand delivery and records everything else."""

    def __init__(self) -> None:
        self.queue: deque = deque()
        self.local: list[tuple[str, EthernetFrame, FrameMeta]] = []
        self.drops: list[tuple[str, str]] = []
        self.accept: bool = True

    def transmit(self, node, nic, data, meta) -> bool:
        if not self.accept:
            return False
        self.queue.append((node, nic, data, meta))
        return True

    def deliver_local(self, node, frame, meta) -> None:
        self.local.append((node.node_id, frame, meta))

    def frame_dropped(self, node, meta, reason) -> None:
        self.drops.append((node.node_id, reason))


class Mesh:
    """Hand-built tree of nodes sharing one data plane; node 0 is the GW."""

    def __init__(self, parents: tuple[int, ...], dual_radio: bool = True) -> None:
        self.sink = RecordingSink()
        self.plane = DataPlane(self.sink)
        self.parents: dict[int, int] = {index + 1: parent for index, parent in enumerate(parents)}
        self.nodes: list[NodeState] = [
            NodeState.create(self.node_id(index), MacFormatter.node_mac(index + 1), index == 0, dual_radio)
            for index in range(len(parents) + 1)
        ]
        self.by_mac: dict[bytes, NodeState] = {node.mac: node for node in self.nodes}
        self.hops: list[tuple[str, str]] = []
        self._frame_id = itertools.count(1)

        for child_index, parent_index in self.parents.items():
            child, parent = self.nodes[child_index], self.nodes[parent_index]
            child.parent_mac = parent.mac
            child.parent_id = parent.node_id
            parent.children.add(child.mac)
            open_tunnel(child, parent.mac, NicRole.SINGLE if child.is_single_nic else NicRole.UP)
            open_tunnel(parent, child.mac, NicRole.SINGLE if parent.is_single_nic else NicRole.DOWN)

    @staticmethod
    def node_id(index: int) -> str:
        return "GW" if index == 0 else f"M{index}"

    @staticmethod
    def host(index: int) -> bytes:
        return INFRA if index == 0 else MacFormatter.host_mac(index)

    def chain_to_gw(self, index: int) -> list[int]:
        path: list[int] = [index]
        while path[-1] != 0:
            path.append(self.parents[path[-1]])
        return path

    def send(self, index: int, dst: bytes, payload: bytes = b"payload") -> EthernetFrame:
        """Originate at node ``index`` and pump the air until it is quiet."""
        inner = EthernetFrame(dst, self.host(index), EthernetFrame.ETHERTYPE_IPV4, payload)
        meta = FrameMeta(next(self._frame_id))
        self.plane.originate(self.nodes[index], inner, meta, now_us=0)
        self.pump()
        return inner

    def pump(self) -> None:
        while self.sink.queue:
            node, _, data, meta = self.sink.queue.popleft()
            outer = Eo11Codec.from_bytes(data)
            receiver = self.by_mac[outer.outer_dst]
            self.hops.append((node.node_id, receiver.node_id))
            self.plane.receive_octets(receiver, data, meta, now_us=0)


def rooted_trees(size: int):
    """Every parent assignment over ``size`` nodes that forms a tree rooted at node 0."""
    for parents in itertools.product(range(size), repeat=size - 1):
        acyclic = True
        for start in range(1, size):
            seen: set[int] = set()
            node = start
            while node != 0:
                if node in seen:
                    acyclic = False
                    break
                seen.add(node)
                node = parents[node - 1]
            if not acyclic:
                break
        if acyclic:
            yield parents


class TestBridgeTable:
    def test_unknown_unicast_floods(self):
        bridge = BridgeTable()
        first = bridge.add_tunnel_port(MacFormatter.node_mac(1), NicRole.UP)
        second = bridge.add_tunnel_port(MacFormatter.node_mac(2), NicRole.DOWN)
        ports, flooded = bridge.egress_ports(first.port_id, MacFormatter.host_mac(9), 0)
        assert flooded
        assert ports == [BridgeTable.LOCAL_PORT_ID, second.port_id]

    def test_learned_destination(self):
        bridge = BridgeTable()
        port = bridge.add_tunnel_port(MacFormatter.node_mac(1), NicRole.UP)
        bridge.learn(MacFormatter.host_mac(1), port.port_id, 0)
        assert bridge.egress_ports(BridgeTable.LOCAL_PORT_ID, MacFormatter.host_mac(1), 10) == (
            [port.port_id],
            False,
        )

    def test_same_port_is_filtered(self):
        bridge = BridgeTable()
        port = bridge.add_tunnel_port(MacFormatter.node_mac(1), NicRole.UP)
        bridge.learn(MacFormatter.host_mac(1), port.port_id, 0)
        assert bridge.egress_ports(port.port_id, MacFormatter.host_mac(1), 10) == ([], False)

    def test_entries_age_out(self):
        bridge = BridgeTable(aging_us=1_000)
        bridge.learn(MacFormatter.host_mac(1), BridgeTable.LOCAL_PORT_ID, 0)
        assert bridge.lookup(MacFormatter.host_mac(1), 1_000) == BridgeTable.LOCAL_PORT_ID
        assert bridge.lookup(MacFormatter.host_mac(1), 1_001) is None

    def test_group_sources_are_not_learned(self):
        bridge = BridgeTable()
        bridge.learn(MacFormatter.BROADCAST, BridgeTable.LOCAL_PORT_ID, 0)
        assert bridge.entries == {}

    def test_remove_port_purges_its_entries(self):
        bridge = BridgeTable()
        port = bridge.add_tunnel_port(MacFormatter.node_mac(1), NicRole.UP)
        bridge.learn(MacFormatter.host_mac(1), port.port_id, 0)
        bridge.learn(MacFormatter.host_mac(2), BridgeTable.LOCAL_PORT_ID, 0)
        assert bridge.remove_port(port.port_id) == 1
        assert list(bridge.entries) == [MacFormatter.host_mac(2)]
        assert bridge.remove_port(BridgeTable.LOCAL_PORT_ID) == 0


class TestSelectNic:
    def test_parent_and_child_ports(self):
        mesh = Mesh((0, 1))
        m1 = mesh.nodes[1]
        to_parent = m1.tunnels[mesh.nodes[0].mac]
        to_child = m1.tunnels[mesh.nodes[2].mac]
        assert mesh.plane.select_nic(m1, to_parent) is m1.up_nic
        assert mesh.plane.select_nic(m1, to_child) is m1.down_nic
        assert m1.up_nic.role is NicRole.UP
        assert m1.down_nic.role is NicRole.DOWN

    def test_gw_uses_its_single_nic(self):
        mesh = Mesh((0, 0))
        gw = mesh.nodes[0]
        nics = {mesh.plane.select_nic(gw, port).role for port in gw.bridge.tunnel_ports}
        assert nics == {NicRole.SINGLE}

    def test_stranger_peer_is_a_consistency_error(self):
        mesh = Mesh((0,))
        m1 = mesh.nodes[1]
        stranger = open_tunnel(m1, MacFormatter.node_mac(42), NicRole.DOWN)
        with pytest.raises(ConsistencyError):
            mesh.plane.select_nic(m1, stranger)


class TestTransmitAndReceive:
    def test_relay_toward_gw_uses_up_nic_with_link_headers(self):
        mesh = Mesh((0, 1))
        mesh.send(2, INFRA)
        m2, m1 = mesh.nodes[2], mesh.nodes[1]
        assert mesh.hops[0] == ("M2", "M1")
        assert ("M1", "GW") in mesh.hops
        assert m2.counters.tx == 1
        assert m1.counters.relayed == 1

    def test_gw_to_host_behind_m2_is_rewrapped_at_m1(self):
        mesh = Mesh((0, 1))
        mesh.send(2, INFRA)
        mesh.hops.clear()
        mesh.send(0, MacFormatter.host_mac(2))
        assert mesh.hops == [("GW", "M1"), ("M1", "M2")]

    def test_broadcast_goes_both_directions(self):
        mesh = Mesh((0, 1, 2))
        inner = mesh.send(2, MacFormatter.BROADCAST)
        receivers = sorted(node_id for node_id, frame, _ in mesh.sink.local if frame == inner)
        assert receivers == ["GW", "M1", "M3"]
        assert mesh.nodes[2].counters.flooded == 1
        assert set(mesh.hops) == {("M2", "M1"), ("M2", "M3"), ("M1", "GW")}

    def test_full_queue_drops_the_copy(self):
        mesh = Mesh((0,))
        mesh.sink.accept = False
        mesh.send(1, INFRA)
        assert mesh.nodes[1].counters.dropped == 1
        assert mesh.sink.drops == [("M1", DataPlane.DROP_QUEUE_FULL)]

    def test_frame_for_another_endpoint_is_ignored(self):
        mesh = Mesh((0, 0))
        inner = EthernetFrame(INFRA, MacFormatter.host_mac(1), EthernetFrame.ETHERTYPE_IPV4)
        outer = Eo11Codec.encode(inner, next_hop=mesh.nodes[0].mac, self_mac=mesh.nodes[1].mac)
        assert not mesh.plane.on_receive(mesh.nodes[2], outer, FrameMeta(1), 0)
        assert mesh.nodes[2].counters.rx == 0

    def test_frame_without_tunnel_is_dropped(self):
        mesh = Mesh((0,))
        gw = mesh.nodes[0]
        inner = EthernetFrame(INFRA, MacFormatter.host_mac(7), EthernetFrame.ETHERTYPE_IPV4)
        outer = Eo11Codec.encode(inner, next_hop=gw.mac, self_mac=MacFormatter.node_mac(7))
        assert not mesh.plane.on_receive(gw, outer, FrameMeta(1), 0)
        assert mesh.sink.drops == [("GW", DataPlane.DROP_NO_TUNNEL)]

    def test_garbage_octets_are_dropped(self):
        mesh = Mesh((0,))
        assert not mesh.plane.receive_octets(mesh.nodes[0], bytes(5), FrameMeta(1), 0)
        assert mesh.sink.drops == [("GW", DataPlane.DROP_MALFORMED)]


class TestAllSmallTrees:
    @pytest.mark.parametrize("size", [2, 3, 4, 5])
    @pytest.mark.parametrize("dual_radio", [True, False])
    def test_delivery_matches_flood_then_learn(self, size, dual_radio):
        for parents in rooted_trees(size):
            mesh = Mesh(parents, dual_radio)
            for index in range(1, size):
                chain = mesh.chain_to_gw(index)

                mesh.sink.local.clear()
                mesh.hops.clear()
                upstream = mesh.send(index, INFRA, payload=bytes([index]) * 20)
                at_gw = [(frame, meta) for node_id, frame, meta in mesh.sink.local if node_id == "GW"]
                assert len(at_gw) == 1
                frame, meta = at_gw[0]
                assert frame == upstream
                assert list(meta.path) == [mesh.node_id(hop) for hop in chain]
                for _, _, copy_meta in mesh.sink.local:
                    assert len(set(copy_meta.path)) == len(copy_meta.path)

                mesh.sink.local.clear()
                mesh.hops.clear()
                flooded_before = [node.counters.flooded for node in mesh.nodes]
                reply = mesh.send(0, mesh.host(index), payload=b"reply")
                assert [(node_id, frame) for node_id, frame, _ in mesh.sink.local] == [
                    (mesh.node_id(index), reply)
                ]
                assert [node.counters.flooded for node in mesh.nodes] == flooded_before
                downward = list(reversed(chain))
                assert mesh.hops == [
                    (mesh.node_id(a), mesh.node_id(b)) for a, b in zip(downward, downward[1:])
                ]

    def test_enumeration_counts(self):
        assert [sum(1 for _ in rooted_trees(size)) for size in (2, 3, 4, 5)] == [1, 3, 16, 125]
