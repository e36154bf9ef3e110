"""Handles the tree and channels subcommands."""

from __future__ import annotations

import argparse
from typing import TYPE_CHECKING

from harness.experiment import converge
from harness.reports import emit_channels_csv, emit_tree_csv, tree_text
from models.scenario_config import ScenarioConfig
from simulation.network import NetworkSimulator

if TYPE_CHECKING:
    from main import WifixApp


class TopologyActions:
    """Converged-topology dumps."""

    def __init__(self, app: WifixApp) -> None:
        self.app: WifixApp = app

    def _converged(self, args: argparse.Namespace) -> NetworkSimulator:
        config: ScenarioConfig = self.app.load_scenario(args)
        simulator = NetworkSimulator(config)
        converge(simulator)
        return simulator

    def tree(self, args: argparse.Namespace) -> int:
        """Node, depth, parent and UP/DOWN channel of the converged tree."""
        simulator = self._converged(args)
        with self.app.open_output(args.out) as stream:
            if args.csv:
                emit_tree_csv(simulator.node_summaries(), stream)
            else:
                stream.write(tree_text(simulator.node_summaries()) + "\n")
        return 0

    def channels(self, args: argparse.Namespace) -> int:
        """Weight table behind every MAP's AP-side channel."""
        simulator = self._converged(args)
        with self.app.open_output(args.out) as stream:
            emit_channels_csv(simulator, stream)
        return 0
