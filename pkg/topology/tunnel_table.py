"""Tunnel table upkeep: one Eo11 endpoint and bridge port per neighbor."""

from __future__ import annotations

import logging

from forwarding.port_binding import PortBinding
from models.nic import NicRole
from models.node_state import NodeState
from utils.mac_formatter import MacFormatter

logger = logging.getLogger(__name__)


def open_tunnel(node: NodeState, peer_mac: bytes, nic: NicRole) -> PortBinding:
    """Endpoint towards ``peer_mac``; an existing one is reused."""
    binding: PortBinding | None = node.tunnels.get(peer_mac)
    if binding is not None:
        return binding

    binding = node.bridge.add_tunnel_port(peer_mac, nic)
    node.tunnels[peer_mac] = binding
    logger.debug(
        "%s: tunnel to %s on port %d (%s)",
        node.node_id,
        MacFormatter.format(peer_mac),
        binding.port_id,
        nic.value,
    )
    return binding


def close_tunnel(node: NodeState, peer_mac: bytes) -> bool:
    """Drop the endpoint and its bridge port, purging what was learned on it."""
    binding: PortBinding | None = node.tunnels.pop(peer_mac, None)
    if binding is None:
        return False

    purged: int = node.bridge.remove_port(binding.port_id)
    logger.debug(
        "%s: tunnel to %s closed, %d bridge entries purged",
        node.node_id,
        MacFormatter.format(peer_mac),
        purged,
    )
    return True
