"""Shared fixtures: channel plan, bundled scenarios, tiny networks and a throwaway settings file."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from pathlib import Path

import pytest

from harness.scenario_parser import load_scenario
from models.channel_plan import ChannelPlan
from models.scenario_config import EdgeSpec, FlowSpec, Mode, NodeSpec, ScenarioConfig
from models.simulation_constants import SimulationConstants
from utils.mac_formatter import MacFormatter

ROOT: Path = Path(__file__).resolve().parent
SCENARIOS: Path = ROOT / "scenarios"
FIXTURES: Path = ROOT / "fixtures"

NetworkFactory = Callable[..., ScenarioConfig]


def make_network(
    edges: Sequence[tuple[str, str]],
    gw: str = "GW",
    mode: Mode = Mode.DUAL,
    flows: Sequence[tuple[str, float]] = (),
    packet_size: int = 1400,
    gw_channel: int | None = 6,
    duration_s: float = 1.0,
    seed: int = 1,
    constants: SimulationConstants | None = None,
) -> ScenarioConfig:
    """Config over an edge list; node order is GW first, then first appearance."""
    order: list[str] = [gw]
    for a, b in edges:
        for node_id in (a, b):
            if node_id not in order:
                order.append(node_id)

    nodes = tuple(
        NodeSpec(node_id, MacFormatter.node_mac(index + 1), node_id == gw)
        for index, node_id in enumerate(order)
    )
    return ScenarioConfig(
        name="test",
        nodes=nodes,
        edges=tuple(EdgeSpec(a, b) for a, b in edges),
        mode=mode,
        gw_channel=gw_channel,
        flows=tuple(
            FlowSpec(flow_id, src, rate, packet_size)
            for flow_id, (src, rate) in enumerate(flows, start=1)
        ),
        constants=constants or SimulationConstants(),
        duration_s=duration_s,
        seed=seed,
    )


def chain_edges(length: int) -> list[tuple[str, str]]:
    """GW - M1 - ... - M<length>."""
    names: list[str] = ["GW"] + [f"M{index}" for index in range(1, length + 1)]
    return list(zip(names, names[1:]))


@pytest.fixture
def plan() -> ChannelPlan:
    return ChannelPlan()


@pytest.fixture
def testbed_config() -> ScenarioConfig:
    return load_scenario(SCENARIOS / "testbed.scn")


@pytest.fixture
def network() -> NetworkFactory:
    return make_network


@pytest.fixture
def golden_vectors() -> list[list[str]]:
    """Rows of the golden vector file, split on '|' and stripped."""
    rows: list[list[str]] = []
    for line in (FIXTURES / "golden_vectors.txt").read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        rows.append([cell.strip() for cell in line.split("|")])
    return rows


@pytest.fixture
def settings_ini(tmp_path: Path) -> str:
    return str(tmp_path / "wifix.ini")
