"""Scenario parsing, metrics, result tables, sweeps and the command line."""

from __future__ import annotations

import csv
import io

import numpy as np
import pytest

from conftest import SCENARIOS, chain_edges, make_network
from database.db_manager import DatabaseManager
from harness import (
    MetricsCalculator,
    SweepRow,
    converge,
    emit_channels_csv,
    emit_csv,
    load_scenario,
    parse_scenario,
    run_experiment,
    run_once,
    saturation_onset,
    stored_flow_metrics,
    sweep,
)
from harness.reports import CHANNEL_COLUMNS, RESULT_COLUMNS, format_number
from main import WifixApp
from models.metrics import FlowMetrics, FrameRecord, MetricsReport
from models.scenario_config import FlowSpec, HostKind, Mode
from simulation.network import NetworkSimulator
from utils.errors import ScenarioError
from utils.mac_formatter import MacFormatter

VALID = """\
version = 1.0
name = tiny

[nodes]
GW gw
M1
M2

[edges]
GW M1
M1 M2 rssi=-70

[flows]
1 M2 rate=1
"""


def _issues(text: str) -> list[tuple[int, str]]:
    with pytest.raises(ScenarioError) as raised:
        parse_scenario(text)
    return [(issue.line, issue.message) for issue in raised.value.issues]


def _line_of(text: str, needle: str) -> int:
    return text.splitlines().index(needle) + 1


class TestScenarioParser:
    def test_valid_scenario(self):
        config = parse_scenario(VALID)
        assert config.name == "tiny"
        assert config.node_ids == ("GW", "M1", "M2")
        assert config.gw.node_id == "GW"
        assert config.node("M2").mac == MacFormatter.node_mac(3)
        assert config.rssi("M1", "M2") == -70
        assert config.flows == (FlowSpec(1, "M2", 1.0, 1400),)
        assert config.mode is Mode.DUAL

    def test_duplicate_node(self):
        text = VALID.replace("M2\n\n[edges]", "M2\nM1\n\n[edges]")
        issues = _issues(text)
        assert len(issues) == 1
        line, message = issues[0]
        assert "duplicate node id M1" in message
        repeats = [number for number, row in enumerate(text.splitlines(), start=1) if row == "M1"]
        assert line == repeats[1]

    def test_two_gateways_name_both(self):
        text = VALID.replace("M1\nM2", "M1 gw\nM2")
        (line, message), = _issues(text)
        assert line == _line_of(text, "M1 gw")
        assert "M1" in message and "GW" in message

    def test_missing_gateway(self):
        issues = _issues(VALID.replace("GW gw", "GW"))
        assert (0, "no GW declared") in issues

    def test_disconnected_graph(self):
        text = VALID.replace("M2\n\n", "M2\nM9\n\n")
        (line, message), = _issues(text)
        assert line == _line_of(text, "M9")
        assert "disconnected" in message and "M9" in message

    def test_unknown_channel(self):
        text = VALID + "\n[run]\ngw_channel = 13\n"
        (line, message), = _issues(text)
        assert line == _line_of(text, "gw_channel = 13")
        assert "13" in message

    def test_unknown_node_in_edge(self):
        text = VALID.replace("M1 M2 rssi=-70", "M1 M7")
        issues = _issues(text)
        assert (_line_of(text, "M1 M7"), "unknown node M7") in issues

    def test_newer_major_version(self):
        text = VALID.replace("version = 1.0", "version = 2.0")
        (line, message), = _issues(text)
        assert line == 1
        assert "unsupported scenario version 2.0" in message

    def test_newer_minor_version_is_accepted(self):
        assert parse_scenario(VALID.replace("version = 1.0", "version = 1.3")).name == "tiny"

    def test_gw_flow_source(self):
        issues = _issues(VALID + "2 GW rate=1\n")
        assert any("is the GW" in message for _, message in issues)

    def test_every_issue_reported_in_line_order(self):
        text = VALID.replace("M1 M2 rssi=-70", "M1 M7").replace("version = 1.0", "version = 3") + "1 M1 rate=x\n"
        lines = [line for line, _ in _issues(text)]
        assert len(lines) >= 3
        assert lines == sorted(lines)

    def test_unknown_constant(self):
        issues = _issues(VALID + "\n[constants]\nwarp_factor = 9\n")
        assert any("warp_factor" in message for _, message in issues)

    def test_run_defaults_then_scenario(self):
        config = parse_scenario(VALID, run_defaults={"duration_s": 5.0, "seed": 9})
        assert (config.duration_s, config.seed) == (5.0, 9)
        config = parse_scenario(VALID + "\n[run]\nduration = 2.5\n", run_defaults={"duration_s": 5.0})
        assert config.duration_s == 2.5

    def test_bundled_scenarios(self, testbed_config):
        assert len(testbed_config.nodes) == 7
        assert len(testbed_config.flows) == 6
        assert testbed_config.constants.interference_hops == 4
        assert all(spec.host is HostKind.WIRELESS for spec in testbed_config.nodes if not spec.is_gw)

        chain = parse_scenario((SCENARIOS / "chain.scn").read_text(encoding="utf-8"))
        assert [(event.action, event.node_id, event.time_us) for event in chain.events] == [
            ("down", "M2", 5_000_000),
            ("up", "M2", 6_000_000),
        ]


class TestMetrics:
    def test_jain_index(self):
        assert MetricsCalculator.jain_index([]) == 1.0
        assert MetricsCalculator.jain_index([0.0, 0.0]) == 1.0
        assert MetricsCalculator.jain_index([2.0, 2.0, 2.0]) == pytest.approx(1.0)
        assert MetricsCalculator.jain_index([1.0, 0.0, 0.0, 0.0]) == pytest.approx(0.25)

    def test_jain_bounds(self):
        rng = np.random.default_rng(21)
        for _ in range(500):
            values = rng.uniform(0, 10, size=int(rng.integers(1, 12)))
            index = MetricsCalculator.jain_index(values)
            assert 1 / len(values) - 1e-12 <= index <= 1 + 1e-12

    def test_flow_metrics(self):
        records = [
            FrameRecord(1, 0, "M1", 0, delivered_us=2_000, octets=1000),
            FrameRecord(1, 1, "M1", 10_000, delivered_us=14_000, octets=1000),
            FrameRecord(1, 2, "M1", 20_000, dropped=True, octets=1000),
            FrameRecord(1, 3, "M1", 30_000, octets=1000),
            FrameRecord(2, 0, "M2", 0, octets=500),
        ]
        flows = [FlowSpec(2, "M2", 1.0, 500), FlowSpec(1, "M1", 1.0, 1000)]
        first, second = MetricsCalculator.flow_metrics(records, flows, duration_us=1_000_000)
        assert first == FlowMetrics(
            flow_id=1,
            src_node="M1",
            offered_load_mbps=1.0,
            throughput_mbps=0.016,
            delay_ms=3.0,
            drops=1,
            generated=4,
            delivered=2,
            queued=1,
        )
        assert (second.throughput_mbps, second.delay_ms, second.queued) == (0.0, 0.0, 1)

    def test_average_by_flow(self):
        def report(throughput: float, delay: float) -> MetricsReport:
            flow = FlowMetrics(1, "M1", 2.0, throughput, delay, drops=2)
            return MetricsReport("dual", 2.0, [flow], jain_index=1.0, convergence_us=1000)

        mean = MetricsCalculator.average([report(1.0, 4.0), report(3.0, 2.0)])
        assert mean.flows[0].throughput_mbps == pytest.approx(2.0)
        assert mean.flows[0].delay_ms == pytest.approx(3.0)
        assert mean.repetitions == 2


class TestChannelReport:
    def _rows(self, simulator: NetworkSimulator) -> list[dict[str, str]]:
        stream = io.StringIO()
        emit_channels_csv(simulator, stream)
        return list(csv.DictReader(io.StringIO(stream.getvalue())))

    def test_single_radio_nodes_have_no_assignment(self):
        simulator = NetworkSimulator(make_network(chain_edges(3), mode=Mode.SINGLE))
        converge(simulator)
        assert [summary.depth for summary in simulator.node_summaries()] == [0, 1, 2, 3]
        stream = io.StringIO()
        emit_channels_csv(simulator, stream)
        assert stream.getvalue() == ",".join(CHANNEL_COLUMNS) + "\n"

    def test_mark_follows_the_frozen_down_channel(self):
        simulator = NetworkSimulator(make_network(chain_edges(3)))
        converge(simulator)
        rows = self._rows(simulator)
        down = {summary.node_id: summary.down_channel for summary in simulator.node_summaries()}
        assert {row["node"] for row in rows} == {"M1", "M2", "M3"}
        for node in ("M1", "M2", "M3"):
            marked = [int(row["channel"]) for row in rows if row["node"] == node and row["chosen"] == "*"]
            assert marked == [down[node]]


class TestResultsTable:
    def test_header_only_for_no_reports(self):
        stream = io.StringIO()
        emit_csv([], stream)
        assert stream.getvalue() == ",".join(RESULT_COLUMNS) + "\n"

    def test_number_formatting(self):
        assert format_number(3) == "3"
        assert format_number(1.0) == "1"
        assert format_number(29.48148148) == "29.4815"
        assert format_number(0.5) == "0.5"

    def test_rows_per_flow(self):
        flows = [FlowMetrics(2, "M2", 1.0, 0.98, 1.25, 0), FlowMetrics(1, "M1", 1.0, 1.0, 0.5, 3)]
        stream = io.StringIO()
        emit_csv([MetricsReport("single", 1.0, flows, jain_index=0.9999)], stream)
        rows = list(csv.reader(io.StringIO(stream.getvalue())))
        assert rows[1:] == [
            ["single", "1", "1", "M1", "1", "0.5", "3", "0.9999"],
            ["single", "1", "2", "M2", "0.98", "1.25", "0", "0.9999"],
        ]

    def test_same_seed_same_table(self):
        config = make_network(chain_edges(3), flows=[("M3", 2.0), ("M1", 1.0)], duration_s=0.3)
        tables: list[str] = []
        for _ in range(2):
            stream = io.StringIO()
            emit_csv([run_experiment(config)], stream)
            tables.append(stream.getvalue())
        assert tables[0] == tables[1]


class TestStoredRecords:
    def test_sql_matches_numpy(self):
        config = make_network(chain_edges(3), flows=[("M3", 3.0), ("M2", 1.0)], duration_s=0.5)
        with DatabaseManager() as store:
            result = run_once(config, store=store)
            stored = stored_flow_metrics(store, result.run_id)

        assert [flow.flow_id for flow in stored] == [flow.flow_id for flow in result.report.flows]
        for mine, theirs in zip(result.report.flows, stored):
            assert theirs.delivered == mine.delivered
            assert theirs.drops == mine.drops
            assert theirs.throughput_mbps == pytest.approx(mine.throughput_mbps)
            assert theirs.delay_ms == pytest.approx(mine.delay_ms)

    def test_packet_accounting(self):
        config = make_network(chain_edges(2), flows=[("M2", 2.0)], duration_s=0.5)
        flow = run_once(config).report.flows[0]
        assert flow.generated == flow.delivered + flow.drops + flow.queued
        assert flow.delivered > 0


class TestSweep:
    def test_rows_are_mode_major(self):
        config = make_network([("GW", "M1")], flows=[("M1", 1.0)], duration_s=1.0)
        rows = sweep(config, [0.5, 1.0])
        assert [(row.mode, row.load_mbps) for row in rows] == [
            (Mode.DUAL, 0.5),
            (Mode.DUAL, 1.0),
            (Mode.SINGLE, 0.5),
            (Mode.SINGLE, 1.0),
        ]
        assert saturation_onset(rows, Mode.DUAL) is None

    def test_onset(self):
        def row(load: float, throughput: float):
            flow = FlowMetrics(1, "M1", load, throughput, 1.0, 0)
            return SweepRow(Mode.SINGLE, load, MetricsReport("single", load, [flow]))

        rows = [row(1.0, 0.99), row(2.0, 1.96), row(3.0, 2.5), row(4.0, 2.6)]
        assert saturation_onset(rows, Mode.SINGLE) == 3.0
        assert saturation_onset(rows, Mode.SINGLE, threshold=0.2) == 4.0
        assert saturation_onset(rows, Mode.DUAL) is None


@pytest.mark.slow
class TestTestbedExperiments:
    """Offered-load behaviour of the seven-node testbed in both modes."""

    LOADS = [1.0, 2.0, 3.0, 4.0, 5.0]

    @pytest.fixture(scope="class")
    def rows(self):
        config = load_scenario(SCENARIOS / "testbed.scn").with_duration(2.0)
        return sweep(config, self.LOADS)

    def _by_load(self, rows, mode):
        return {row.load_mbps: row.report for row in rows if row.mode is mode}

    def test_dual_radio_keeps_up_to_four(self, rows):
        for load, report in self._by_load(rows, Mode.DUAL).items():
            if load <= 4.0:
                assert report.mean_throughput_mbps >= 0.95 * load

    def test_baseline_falls_short_early(self, rows):
        baseline = self._by_load(rows, Mode.SINGLE)
        assert baseline[3.0].mean_throughput_mbps < 0.8 * 3.0

    def test_baseline_saturates_at_most_half_as_late(self, rows):
        single = saturation_onset(rows, Mode.SINGLE)
        dual = saturation_onset(rows, Mode.DUAL)
        assert single is not None
        assert dual is None or single <= dual / 2

    def test_dual_radio_delay_is_lower(self, rows):
        dual, single = self._by_load(rows, Mode.DUAL), self._by_load(rows, Mode.SINGLE)
        for load in self.LOADS:
            if load >= 2.0:
                assert dual[load].mean_delay_ms <= single[load].mean_delay_ms

    def test_dual_radio_is_fair_below_saturation(self, rows):
        assert self._by_load(rows, Mode.DUAL)[3.0].jain_index == pytest.approx(1.0, abs=0.01)


class TestCommandLine:
    def _app(self):
        return WifixApp(stdout=io.StringIO(), stderr=io.StringIO())

    def _write(self, tmp_path, text: str) -> str:
        path = tmp_path / "scenario.scn"
        path.write_text(text, encoding="utf-8")
        return str(path)

    def test_run_writes_results(self, tmp_path, settings_ini):
        app = self._app()
        code = app.run(
            ["--settings", settings_ini, "run", self._write(tmp_path, VALID), "--duration", "0.2", "--load", "0.5"]
        )
        assert code == 0
        rows = list(csv.reader(io.StringIO(app.stdout.getvalue())))
        assert rows[0] == list(RESULT_COLUMNS)
        assert [row[:4] for row in rows[1:]] == [["dual", "0.5", "1", "M2"]]

    def test_run_to_file_with_trace(self, tmp_path, settings_ini):
        out, trace = tmp_path / "results.csv", tmp_path / "trace.tsv"
        code = self._app().run(
            [
                "--settings", settings_ini, "run", self._write(tmp_path, VALID),
                "--duration", "0.2", "--out", str(out), "--trace", str(trace),
            ]
        )
        assert code == 0
        assert out.read_text(encoding="utf-8").startswith("mode,")
        assert trace.read_text(encoding="utf-8").startswith("time_us\tkind\tnode")

    def test_invalid_scenario_exits_2(self, tmp_path, settings_ini):
        app = self._app()
        code = app.run(["--settings", settings_ini, "run", self._write(tmp_path, VALID.replace("GW gw", "GW"))])
        assert code == WifixApp.EXIT_VALIDATION
        assert "no GW declared" in app.stderr.getvalue()

    def test_unknown_mode_exits_2(self, tmp_path, settings_ini):
        code = self._app().run(["--settings", settings_ini, "tree", self._write(tmp_path, VALID), "--mode", "triple"])
        assert code == WifixApp.EXIT_VALIDATION

    def test_convergence_timeout_exits_3(self, tmp_path, settings_ini):
        text = VALID + "\n[constants]\nconvergence_timeout_s = 0.05\n"
        app = self._app()
        code = app.run(["--settings", settings_ini, "run", self._write(tmp_path, text)])
        assert code == WifixApp.EXIT_EXPERIMENT
        assert "did not converge" in app.stderr.getvalue()

    def test_tree(self, tmp_path, settings_ini):
        app = self._app()
        assert app.run(["--settings", settings_ini, "tree", self._write(tmp_path, VALID)]) == 0
        lines = app.stdout.getvalue().splitlines()
        assert lines[0].startswith("GW depth=0")
        assert lines[1].startswith("  M1 depth=1 up=")
        assert lines[2].startswith("    M2 depth=2")

    def test_channels_marks_the_choice(self, tmp_path, settings_ini):
        app = self._app()
        assert app.run(["--settings", settings_ini, "channels", self._write(tmp_path, VALID)]) == 0
        rows = list(csv.DictReader(io.StringIO(app.stdout.getvalue())))
        for node in ("M1", "M2"):
            assert sum(1 for row in rows if row["node"] == node and row["chosen"] == "*") == 1

    def test_channels_in_single_radio_mode(self, tmp_path, settings_ini):
        app = self._app()
        code = app.run(["--settings", settings_ini, "channels", self._write(tmp_path, VALID), "--mode", "single"])
        assert code == 0
        assert app.stdout.getvalue() == ",".join(CHANNEL_COLUMNS) + "\n"

    def test_sweep_reports_onset(self, tmp_path, settings_ini):
        app = self._app()
        code = app.run(
            [
                "--settings", settings_ini, "sweep", self._write(tmp_path, VALID),
                "--duration", "0.2", "--loads", "0.5,1", "--modes", "dual",
            ]
        )
        assert code == 0
        assert len(app.stdout.getvalue().splitlines()) == 3
        assert "saturation onset (dual):" in app.stderr.getvalue()

    def test_settings_feed_scenarios(self, tmp_path, settings_ini):
        app = self._app()
        assert app.run(["--settings", settings_ini, "config", "set", "experiment.duration_s", "0.2"]) == 0
        assert app.run(["--settings", settings_ini, "config", "show"]) == 0
        assert "experiment.duration_s" in app.stdout.getvalue()
        assert "(custom)" in app.stdout.getvalue()

        fresh = self._app()
        assert fresh.run(["--settings", settings_ini, "run", self._write(tmp_path, VALID)]) == 0

    def test_bad_setting_exits_2(self, settings_ini):
        app = self._app()
        assert app.run(["--settings", settings_ini, "config", "set", "medium.queue_depth", "0"]) == 2
        assert app.run(["--settings", settings_ini, "config", "set", "nowhere", "1"]) == 2
