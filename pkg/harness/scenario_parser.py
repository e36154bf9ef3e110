"""Line-oriented scenario files.

A scenario is a handful of ``[section]`` blocks plus top-level ``key = value``
lines (``version``, ``name``). Blank lines and ``#`` comments are ignored.
Every problem found is reported with its line number; nothing is returned
unless the whole file is valid.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from packaging.version import InvalidVersion, Version

from models.channel_plan import Band, ChannelPlan
from models.scenario_config import (
    EdgeSpec,
    FlowSpec,
    HostKind,
    Mode,
    NodeEventSpec,
    NodeSpec,
    ScenarioConfig,
)
from models.simulation_constants import SimulationConstants
from simulation.conflict_graph import ConflictGraph
from utils.errors import ConfigurationError, ScenarioError, ScenarioIssue
from utils.mac_formatter import MacFormatter

logger = logging.getLogger(__name__)


@dataclass
class _Draft:
    """Everything read so far, with the line each item came from."""

    values: dict[str, tuple[int, str]] = field(default_factory=dict)
    nodes: list[tuple[int, NodeSpec]] = field(default_factory=list)
    edges: list[tuple[int, EdgeSpec]] = field(default_factory=list)
    plan: dict[Band, tuple[int, tuple[int, ...]]] = field(default_factory=dict)
    flows: list[tuple[int, FlowSpec]] = field(default_factory=list)
    constants: dict[str, tuple[int, str]] = field(default_factory=dict)
    events: list[tuple[int, NodeEventSpec]] = field(default_factory=list)


class ScenarioParser:
    """Parses and validates scenario text into a ScenarioConfig."""

    # ------------------------------------------------------------------
    # Constants
    # ------------------------------------------------------------------

    SECTIONS: tuple[str, ...] = ("nodes", "edges", "plan", "run", "flows", "constants", "events")
    TOP_LEVEL_KEYS: tuple[str, ...] = ("version", "name")
    RUN_KEYS: tuple[str, ...] = (
        "mode", "gw_channel", "gw_band", "duration", "repetitions", "seed",
    )
    SUPPORTED_VERSION: Version = Version(ScenarioConfig.FORMAT_VERSION)
    COMMENT: str = "#"

    ERROR_SECTION: str = "unknown section [{name}]"
    ERROR_OUTSIDE: str = "line outside of any section: {text!r}"
    ERROR_KEY_VALUE: str = "expected key = value"
    ERROR_UNKNOWN_KEY: str = "unknown key {key!r} in {where}"
    ERROR_REPEATED_KEY: str = "{key} already set on line {line}"
    ERROR_VERSION: str = "unsupported scenario version {version} (reader supports {supported})"
    ERROR_DUPLICATE_NODE: str = "duplicate node id {node} (first declared on line {line})"
    ERROR_DUPLICATE_MAC: str = "MAC {mac} already used by {node}"
    ERROR_NO_GW: str = "no GW declared"
    ERROR_MANY_GW: str = "more than one GW: {node} (line {line}) and {other} (line {other_line})"
    ERROR_UNKNOWN_NODE: str = "unknown node {node}"
    ERROR_SELF_EDGE: str = "edge from {node} to itself"
    ERROR_DISCONNECTED: str = "graph is disconnected: {nodes} unreachable from the GW"
    ERROR_UNKNOWN_CHANNEL: str = "unknown channel {channel} (not in the channel plan)"
    ERROR_FLOW_SOURCE: str = "flow source {node} is the GW"
    ERROR_DUPLICATE_FLOW: str = "duplicate flow id {flow}"
    ERROR_EVENT_ACTION: str = "event action must be 'down' or 'up', got {action!r}"
    ERROR_NUMBER: str = "{what} must be a number, got {text!r}"
    ERROR_POSITIVE: str = "{what} must be positive, got {value}"

    # ------------------------------------------------------------------
    # Initialization
    # ------------------------------------------------------------------

    def __init__(
        self,
        base_constants: SimulationConstants | None = None,
        run_defaults: Mapping[str, Any] | None = None,
    ) -> None:
        """Defaults for whatever the scenario leaves unset."""
        self.base_constants: SimulationConstants = base_constants or SimulationConstants()
        self.run_defaults: dict[str, Any] = dict(run_defaults or {})
        self.issues: list[ScenarioIssue] = []

    # ------------------------------------------------------------------
    # Entry Points
    # ------------------------------------------------------------------

    def parse(self, text: str, name: str = "scenario") -> ScenarioConfig:
        """Fully validated config, or ScenarioError listing every issue."""
        self.issues = []
        draft: _Draft = self._read(text)
        config: ScenarioConfig | None = self._build(draft, name)
        if self.issues or config is None:
            raise ScenarioError(sorted(self.issues, key=lambda issue: issue.line))
        return config

    def load(self, path: str | Path) -> ScenarioConfig:
        """Parse a scenario file; its stem is the default name."""
        file_path = Path(path)
        try:
            text: str = file_path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigurationError(f"cannot read scenario {file_path}: {exc}") from exc
        return self.parse(text, name=file_path.stem)

    # ------------------------------------------------------------------
    # Reading
    # ------------------------------------------------------------------

    def _issue(self, line: int, message: str) -> None:
        self.issues.append(ScenarioIssue(line, message))

    def _read(self, text: str) -> _Draft:
        draft = _Draft()
        section: str | None = None

        for number, raw in enumerate(text.splitlines(), start=1):
            line: str = raw.split(self.COMMENT, 1)[0].strip()
            if not line:
                continue

            if line.startswith("[") and line.endswith("]"):
                section = line[1:-1].strip().lower()
                if section not in self.SECTIONS:
                    self._issue(number, self.ERROR_SECTION.format(name=section))
                    section = "?"
                continue

            if section is None:
                self._read_key_value(number, line, draft.values, self.TOP_LEVEL_KEYS, "the header")
            elif section == "run":
                self._read_key_value(number, line, draft.values, self.RUN_KEYS, "[run]")
            elif section == "constants":
                self._read_key_value(
                    number, line, draft.constants, SimulationConstants.field_names(), "[constants]"
                )
            elif section == "nodes":
                self._read_node(number, line, draft)
            elif section == "edges":
                self._read_edge(number, line, draft)
            elif section == "plan":
                self._read_plan(number, line, draft)
            elif section == "flows":
                self._read_flow(number, line, draft)
            elif section == "events":
                self._read_event(number, line, draft)

        return draft

    def _read_key_value(
        self,
        number: int,
        line: str,
        target: dict[str, tuple[int, str]],
        allowed: tuple[str, ...],
        where: str,
    ) -> None:
        key, sep, value = line.partition("=")
        key, value = key.strip().lower(), value.strip()
        if not sep or not key or not value:
            self._issue(number, self.ERROR_KEY_VALUE)
            return
        if key not in allowed:
            self._issue(number, self.ERROR_UNKNOWN_KEY.format(key=key, where=where))
            return
        if key in target:
            self._issue(number, self.ERROR_REPEATED_KEY.format(key=key, line=target[key][0]))
            return
        target[key] = (number, value)

    def _read_node(self, number: int, line: str, draft: _Draft) -> None:
        tokens: list[str] = line.split()
        node_id: str = tokens[0]
        mac: bytes | None = None
        is_gw: bool = False
        host: HostKind = HostKind.WIRED

        for token in tokens[1:]:
            lowered: str = token.lower()
            if lowered == "gw":
                is_gw = True
            elif lowered.startswith("host="):
                try:
                    host = HostKind(lowered.removeprefix("host="))
                except ValueError:
                    self._issue(number, f"unknown host kind {token!r}")
            elif MacFormatter.PATTERN.match(token):
                mac = MacFormatter.parse(token)
            else:
                self._issue(number, f"unexpected node attribute {token!r}")

        if mac is None:
            mac = MacFormatter.node_mac(len(draft.nodes) + 1)
        draft.nodes.append((number, NodeSpec(node_id, mac, is_gw, host)))

    def _read_edge(self, number: int, line: str, draft: _Draft) -> None:
        tokens: list[str] = line.split()
        if len(tokens) < 2:
            self._issue(number, "edge needs two node ids")
            return

        rssi: float = ScenarioConfig.DEFAULT_RSSI
        for token in tokens[2:]:
            key, _, value = token.partition("=")
            if key.lower() != "rssi":
                self._issue(number, f"unexpected edge attribute {token!r}")
                continue
            parsed = self._number(number, value, "rssi")
            if parsed is not None:
                rssi = parsed
        draft.edges.append((number, EdgeSpec(tokens[0], tokens[1], rssi)))

    def _read_plan(self, number: int, line: str, draft: _Draft) -> None:
        key, sep, value = line.partition("=")
        if not sep:
            self._issue(number, self.ERROR_KEY_VALUE)
            return
        try:
            band = Band.parse(key)
        except ConfigurationError as exc:
            self._issue(number, str(exc))
            return

        channels: list[int] = []
        for token in value.replace(",", " ").split():
            parsed = self._integer(number, token, "channel")
            if parsed is not None:
                channels.append(parsed)
        draft.plan[band] = (number, tuple(channels))

    def _read_flow(self, number: int, line: str, draft: _Draft) -> None:
        tokens: list[str] = line.split()
        if len(tokens) < 2:
            self._issue(number, "flow needs an id and a source node")
            return

        flow_id = self._integer(number, tokens[0], "flow id")
        attributes: dict[str, float] = {}
        for token in tokens[2:]:
            key, sep, value = token.partition("=")
            key = key.lower()
            if not sep or key not in ("rate", "size", "start", "stop"):
                self._issue(number, f"unexpected flow attribute {token!r}")
                continue
            parsed = self._number(number, value, key)
            if parsed is not None:
                attributes[key] = parsed

        if flow_id is None:
            return
        if "rate" not in attributes:
            self._issue(number, "flow needs rate=<Mbit/s>")
            return

        rate: float = attributes["rate"]
        size: float = attributes.get("size", 1400)
        if rate < 0:
            self._issue(number, self.ERROR_POSITIVE.format(what="rate", value=rate))
            return
        if size <= 0 or not float(size).is_integer():
            self._issue(number, self.ERROR_POSITIVE.format(what="size", value=size))
            return

        draft.flows.append(
            (
                number,
                FlowSpec(
                    flow_id=flow_id,
                    src_node=tokens[1],
                    rate_mbps=rate,
                    packet_size=int(size),
                    start_s=attributes.get("start", 0.0),
                    stop_s=attributes.get("stop"),
                ),
            )
        )

    def _read_event(self, number: int, line: str, draft: _Draft) -> None:
        tokens: list[str] = line.split()
        if len(tokens) != 3:
            self._issue(number, "event needs: down|up <node> <time_s>")
            return
        action: str = tokens[0].lower()
        if action not in ("down", "up"):
            self._issue(number, self.ERROR_EVENT_ACTION.format(action=tokens[0]))
            return
        time_s = self._number(number, tokens[2], "event time")
        if time_s is None:
            return
        if time_s < 0:
            self._issue(number, self.ERROR_POSITIVE.format(what="event time", value=time_s))
            return
        draft.events.append((number, NodeEventSpec(action, tokens[1], time_s)))

    def _number(self, number: int, text: str, what: str) -> float | None:
        try:
            return float(text)
        except ValueError:
            self._issue(number, self.ERROR_NUMBER.format(what=what, text=text))
            return None

    def _integer(self, number: int, text: str, what: str) -> int | None:
        try:
            return int(text)
        except ValueError:
            self._issue(number, self.ERROR_NUMBER.format(what=what, text=text))
            return None

    # ------------------------------------------------------------------
    # Validation
    # ------------------------------------------------------------------

    def _build(self, draft: _Draft, name: str) -> ScenarioConfig | None:
        self._check_version(draft)
        nodes: dict[str, tuple[int, NodeSpec]] = self._check_nodes(draft)
        edges: list[EdgeSpec] = self._check_edges(draft, nodes)
        plan: ChannelPlan = self._check_plan(draft)

        if nodes and not self.issues:
            self._check_connected(nodes, edges)

        mode: Mode = self._mode(draft)
        gw_channel, gw_band = self._gw_channel(draft, plan)
        flows: list[FlowSpec] = self._check_flows(draft, nodes)
        events: list[NodeEventSpec] = self._check_events(draft, nodes)
        constants: SimulationConstants = self._constants(draft)

        duration: float = self._run_number(draft, "duration", ScenarioConfig.DEFAULT_DURATION_S)
        repetitions: int = int(self._run_number(draft, "repetitions", 1, integer=True))
        seed: int = int(self._run_number(draft, "seed", 1, integer=True, positive=False))

        if self.issues:
            return None

        return ScenarioConfig(
            name=draft.values.get("name", (0, name))[1],
            nodes=tuple(spec for _, spec in sorted(nodes.values(), key=lambda item: item[0])),
            edges=tuple(edges),
            plan=plan,
            mode=mode,
            gw_channel=gw_channel,
            gw_band=gw_band,
            flows=tuple(flows),
            constants=constants,
            duration_s=duration,
            repetitions=repetitions,
            seed=seed,
            events=tuple(events),
        )

    def _check_version(self, draft: _Draft) -> None:
        if "version" not in draft.values:
            return
        number, text = draft.values["version"]
        try:
            version = Version(text)
        except InvalidVersion:
            self._issue(number, f"invalid version {text!r}")
            return
        if version.major > self.SUPPORTED_VERSION.major:
            self._issue(
                number,
                self.ERROR_VERSION.format(version=version, supported=self.SUPPORTED_VERSION),
            )

    def _check_nodes(self, draft: _Draft) -> dict[str, tuple[int, NodeSpec]]:
        nodes: dict[str, tuple[int, NodeSpec]] = {}
        macs: dict[bytes, str] = {}
        gateways: list[tuple[int, NodeSpec]] = []

        for number, spec in draft.nodes:
            if spec.node_id in nodes:
                self._issue(
                    number,
                    self.ERROR_DUPLICATE_NODE.format(node=spec.node_id, line=nodes[spec.node_id][0]),
                )
                continue
            if spec.mac in macs:
                self._issue(
                    number,
                    self.ERROR_DUPLICATE_MAC.format(mac=MacFormatter.format(spec.mac), node=macs[spec.mac]),
                )
                continue
            nodes[spec.node_id] = (number, spec)
            macs[spec.mac] = spec.node_id
            if spec.is_gw:
                gateways.append((number, spec))

        if not gateways:
            self._issue(0, self.ERROR_NO_GW)
        for number, spec in gateways[1:]:
            first_line, first = gateways[0]
            self._issue(
                number,
                self.ERROR_MANY_GW.format(
                    node=spec.node_id, line=number, other=first.node_id, other_line=first_line
                ),
            )
        return nodes

    def _check_edges(self, draft: _Draft, nodes: dict[str, tuple[int, NodeSpec]]) -> list[EdgeSpec]:
        edges: list[EdgeSpec] = []
        for number, edge in draft.edges:
            unknown: list[str] = [node for node in (edge.a, edge.b) if node not in nodes]
            if unknown:
                for node in unknown:
                    self._issue(number, self.ERROR_UNKNOWN_NODE.format(node=node))
                continue
            if edge.a == edge.b:
                self._issue(number, self.ERROR_SELF_EDGE.format(node=edge.a))
                continue
            edges.append(edge)
        return edges

    def _check_plan(self, draft: _Draft) -> ChannelPlan:
        band_24 = draft.plan.get(Band.BAND_24, (0, ChannelPlan.DEFAULT_BAND_24))
        band_5 = draft.plan.get(Band.BAND_5, (0, ChannelPlan.DEFAULT_BAND_5))
        try:
            return ChannelPlan(band_24=band_24[1], band_5=band_5[1])
        except ConfigurationError as exc:
            self._issue(max(band_24[0], band_5[0]), str(exc))
            return ChannelPlan()

    def _check_connected(self, nodes: dict[str, tuple[int, NodeSpec]], edges: list[EdgeSpec]) -> None:
        adjacency: dict[str, set[str]] = {node_id: set() for node_id in nodes}
        for edge in edges:
            adjacency[edge.a].add(edge.b)
            adjacency[edge.b].add(edge.a)

        gw: str = next(node_id for node_id, (_, spec) in nodes.items() if spec.is_gw)
        reachable: dict[str, int] = ConflictGraph(adjacency).bfs(gw)
        unreachable: list[str] = [node_id for node_id in nodes if node_id not in reachable]
        if unreachable:
            line: int = min(nodes[node_id][0] for node_id in unreachable)
            self._issue(line, self.ERROR_DISCONNECTED.format(nodes=", ".join(unreachable)))

    def _mode(self, draft: _Draft) -> Mode:
        if "mode" not in draft.values:
            return Mode.DUAL
        number, text = draft.values["mode"]
        try:
            return Mode.parse(text)
        except ValueError as exc:
            self._issue(number, str(exc))
            return Mode.DUAL

    def _gw_channel(self, draft: _Draft, plan: ChannelPlan) -> tuple[int | None, Band]:
        band: Band = Band.BAND_24
        if "gw_band" in draft.values:
            number, text = draft.values["gw_band"]
            try:
                band = Band.parse(text)
            except ConfigurationError as exc:
                self._issue(number, str(exc))

        if "gw_channel" not in draft.values:
            return None, band

        number, text = draft.values["gw_channel"]
        channel = self._integer(number, text, "gw_channel")
        if channel is None:
            return None, band
        if not plan.contains(channel):
            self._issue(number, self.ERROR_UNKNOWN_CHANNEL.format(channel=channel))
            return None, band
        return channel, plan.band_of(channel) or band

    def _check_flows(self, draft: _Draft, nodes: dict[str, tuple[int, NodeSpec]]) -> list[FlowSpec]:
        flows: list[FlowSpec] = []
        seen: set[int] = set()
        for number, flow in draft.flows:
            if flow.src_node not in nodes:
                self._issue(number, self.ERROR_UNKNOWN_NODE.format(node=flow.src_node))
                continue
            if nodes[flow.src_node][1].is_gw:
                self._issue(number, self.ERROR_FLOW_SOURCE.format(node=flow.src_node))
                continue
            if flow.flow_id in seen:
                self._issue(number, self.ERROR_DUPLICATE_FLOW.format(flow=flow.flow_id))
                continue
            seen.add(flow.flow_id)
            flows.append(flow)
        return flows

    def _check_events(
        self, draft: _Draft, nodes: dict[str, tuple[int, NodeSpec]]
    ) -> list[NodeEventSpec]:
        events: list[NodeEventSpec] = []
        for number, event in draft.events:
            if event.node_id not in nodes:
                self._issue(number, self.ERROR_UNKNOWN_NODE.format(node=event.node_id))
                continue
            events.append(event)
        return events

    def _constants(self, draft: _Draft) -> SimulationConstants:
        constants: SimulationConstants = self.base_constants
        for key, (number, text) in draft.constants.items():
            try:
                constants = constants.with_overrides({key: text})
            except ConfigurationError as exc:
                self._issue(number, str(exc))
        return constants

    def _run_number(
        self,
        draft: _Draft,
        key: str,
        fallback: float,
        integer: bool = False,
        positive: bool = True,
    ) -> float:
        default: float = self.run_defaults.get(
            {"duration": "duration_s"}.get(key, key), fallback
        )
        if key not in draft.values:
            return default

        number, text = draft.values[key]
        value = self._integer(number, text, key) if integer else self._number(number, text, key)
        if value is None:
            return default
        if positive and value <= 0:
            self._issue(number, self.ERROR_POSITIVE.format(what=key, value=value))
            return default
        return value


def parse_scenario(
    text: str,
    name: str = "scenario",
    base_constants: SimulationConstants | None = None,
    run_defaults: Mapping[str, Any] | None = None,
) -> ScenarioConfig:
    """Parse scenario text into a validated config."""
    return ScenarioParser(base_constants, run_defaults).parse(text, name)


def load_scenario(
    path: str | Path,
    base_constants: SimulationConstants | None = None,
    run_defaults: Mapping[str, Any] | None = None,
) -> ScenarioConfig:
    """Parse a scenario file into a validated config."""
    return ScenarioParser(base_constants, run_defaults).load(path)
