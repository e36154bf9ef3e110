"""Command-line entry point for the WiFIX-DR simulator and experiment harness."""

from __future__ import annotations

import argparse
import contextlib
import sys
from collections.abc import Callable, Iterator, Sequence
from typing import TextIO

from actions import ExperimentActions, SettingsActions, TopologyActions
from harness.scenario_parser import load_scenario
from models.scenario_config import Mode, ScenarioConfig
from utils.errors import (
    ConfigurationError,
    ContractViolation,
    DecodeError,
    EncodeError,
    ScenarioError,
    WifixError,
)
from utils.logging_setup import configure_logging
from utils.settings_manager import SettingsManager


class WifixApp:
    """Builds the argument parser and dispatches subcommands to the action handlers."""

    # ------------------------------------------------------------------
    # Constants
    # ------------------------------------------------------------------

    PROG: str = "wifix-dr"
    DESCRIPTION: str = "Dual-radio stub wireless mesh: protocol engine, simulator and experiments."

    EXIT_OK: int = 0
    EXIT_VALIDATION: int = 2
    EXIT_EXPERIMENT: int = 3
    VALIDATION_ERRORS: tuple[type[WifixError], ...] = (
        ScenarioError,
        ConfigurationError,
        ContractViolation,
        EncodeError,
        DecodeError,
    )

    DEFAULT_LOADS: str = "1,2,3,4,5"
    DEFAULT_MODES: str = "dual,single"
    DEFAULT_THRESHOLD: float = 0.05
    ERROR_PREFIX: str = "error: "

    # ------------------------------------------------------------------
    # Initialization
    # ------------------------------------------------------------------

    def __init__(self, stdout: TextIO | None = None, stderr: TextIO | None = None) -> None:
        self.stdout: TextIO = stdout or sys.stdout
        self.stderr: TextIO = stderr or sys.stderr
        self._settings: SettingsManager | None = None
        self.settings_path: str | None = None

        self.experiment_actions = ExperimentActions(self)
        self.topology_actions = TopologyActions(self)
        self.settings_actions = SettingsActions(self)
        self.parser: argparse.ArgumentParser = self._build_parser()

    @property
    def settings(self) -> SettingsManager:
        """Created on first use so commands that do not need it never touch the store."""
        if self._settings is None:
            self._settings = SettingsManager(self.settings_path)
        return self._settings

    # ------------------------------------------------------------------
    # Parser
    # ------------------------------------------------------------------

    def _build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(prog=self.PROG, description=self.DESCRIPTION)
        parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
        parser.add_argument("--log-file", help="also write the log to this file")
        parser.add_argument("--settings", help="INI file instead of the per-user settings store")
        commands = parser.add_subparsers(dest="command", required=True)

        run = commands.add_parser("run", help="converge and run one experiment")
        self._add_scenario_arguments(run)
        run.add_argument("--load", type=float, help="per-flow offered load in Mbit/s")
        run.add_argument("--out", help="results CSV (default: stdout)")
        run.add_argument("--records", help="sqlite file for raw frame records (default: in memory)")
        run.add_argument("--trace", help="tab-separated event trace file")
        run.set_defaults(handler=self.experiment_actions.run)

        sweep = commands.add_parser("sweep", help="offered-load sweep under both modes")
        self._add_scenario_arguments(sweep)
        sweep.add_argument("--loads", default=self.DEFAULT_LOADS, help="comma-separated Mbit/s per flow")
        sweep.add_argument("--modes", default=self.DEFAULT_MODES, help="comma-separated modes")
        sweep.add_argument("--threshold", type=float, default=self.DEFAULT_THRESHOLD)
        sweep.add_argument("--out", help="results CSV (default: stdout)")
        sweep.add_argument("--records", help="sqlite file for raw frame records (default: in memory)")
        sweep.set_defaults(handler=self.experiment_actions.sweep)

        tree = commands.add_parser("tree", help="dump the converged topology")
        self._add_scenario_arguments(tree)
        tree.add_argument("--csv", action="store_true", help="CSV instead of indented text")
        tree.add_argument("--out", help="output file (default: stdout)")
        tree.set_defaults(handler=self.topology_actions.tree)

        channels = commands.add_parser("channels", help="per-node channel weight tables")
        self._add_scenario_arguments(channels)
        channels.add_argument("--out", help="output file (default: stdout)")
        channels.set_defaults(handler=self.topology_actions.channels)

        config = commands.add_parser("config", help="persisted simulation defaults")
        config_commands = config.add_subparsers(dest="config_command", required=True)
        config_commands.add_parser("show").set_defaults(handler=self.settings_actions.show)
        config_set = config_commands.add_parser("set")
        config_set.add_argument("key", help="category.key")
        config_set.add_argument("value")
        config_set.set_defaults(handler=self.settings_actions.set)
        config_reset = config_commands.add_parser("reset")
        config_reset.add_argument("category", nargs="?")
        config_reset.set_defaults(handler=self.settings_actions.reset)

        return parser

    @staticmethod
    def _add_scenario_arguments(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("scenario", help="scenario file")
        parser.add_argument("--mode", help="dual or single")
        parser.add_argument("--seed", type=int)
        parser.add_argument("--duration", type=float, help="traffic window in seconds")
        parser.add_argument("--repetitions", type=int)

    # ------------------------------------------------------------------
    # Shared Helpers
    # ------------------------------------------------------------------

    def load_scenario(self, args: argparse.Namespace) -> ScenarioConfig:
        """Scenario file over persisted defaults, with command-line flags on top."""
        config: ScenarioConfig = load_scenario(
            args.scenario,
            base_constants=self.settings.simulation_constants(),
            run_defaults=self.settings.run_defaults(),
        )
        if args.mode is not None:
            config = config.with_mode(Mode.parse(args.mode))
        if args.seed is not None:
            config = config.with_seed(args.seed)
        if args.duration is not None:
            if args.duration <= 0:
                raise ConfigurationError(f"--duration must be positive, got {args.duration}")
            config = config.with_duration(args.duration)
        if args.repetitions is not None:
            if args.repetitions < 1:
                raise ConfigurationError(f"--repetitions must be at least 1, got {args.repetitions}")
            config = config.with_repetitions(args.repetitions)
        return config

    @contextlib.contextmanager
    def open_output(self, path: str | None) -> Iterator[TextIO]:
        """A file opened for writing, or stdout when no path is given."""
        if path is None:
            yield self.stdout
            return
        try:
            with open(path, "w", encoding="utf-8", newline="") as stream:
                yield stream
        except OSError as exc:
            raise ConfigurationError(f"cannot write {path}: {exc}") from exc

    def print(self, text: str, err: bool = False) -> None:
        stream: TextIO = self.stderr if err else self.stdout
        stream.write(text + "\n")

    # ------------------------------------------------------------------
    # Entry Point
    # ------------------------------------------------------------------

    def run(self, argv: Sequence[str] | None = None) -> int:
        """Parse, dispatch, and map errors to exit codes."""
        args: argparse.Namespace = self.parser.parse_args(argv)
        configure_logging(args.verbose, args.log_file)
        self.settings_path = args.settings

        handler: Callable[[argparse.Namespace], int] = args.handler
        try:
            return handler(args)
        except self.VALIDATION_ERRORS as exc:
            self.print(self.ERROR_PREFIX + str(exc), err=True)
            return self.EXIT_VALIDATION
        except WifixError as exc:
            self.print(self.ERROR_PREFIX + str(exc), err=True)
            return self.EXIT_EXPERIMENT


def main() -> None:
    """Application entry point."""
    sys.exit(WifixApp().run())


if __name__ == "__main__":
    main()
