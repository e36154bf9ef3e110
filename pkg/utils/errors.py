"""Exception hierarchy shared by every WiFIX-DR package."""

from __future__ import annotations

from dataclasses import dataclass


class WifixError(Exception):
    """Base class for all errors raised by the protocol engine and harness."""


class EncodeError(WifixError, ValueError):
    """A value cannot be represented in its wire format."""


class DecodeError(WifixError, ValueError):
    """Octets do not form a valid frame; ``field`` names the offending field."""

    MESSAGE_FORMAT: str = "{field}: {detail}"

    def __init__(self, field: str, detail: str) -> None:
        super().__init__(self.MESSAGE_FORMAT.format(field=field, detail=detail))
        self.field: str = field
        self.detail: str = detail


class ContractViolation(WifixError, ValueError):
    """A caller broke an operation's precondition."""


class AssignmentError(WifixError):
    """No channel can be assigned."""


class ConfigurationError(WifixError, ValueError):
    """Invalid plan, constant or setting."""


class ConsistencyError(WifixError):
    """Internal protocol state disagrees with itself."""


@dataclass(frozen=True)
class ScenarioIssue:
    """One line-anchored problem found while parsing a scenario."""

    line: int
    message: str

    def __str__(self) -> str:
        if self.line <= 0:
            return self.message
        return f"line {self.line}: {self.message}"


class ScenarioError(WifixError, ValueError):
    """Scenario text failed validation; carries every issue found."""

    def __init__(self, issues: list[ScenarioIssue]) -> None:
        super().__init__("; ".join(str(issue) for issue in issues))
        self.issues: list[ScenarioIssue] = list(issues)


class ExperimentError(WifixError):
    """An experiment could not be completed (e.g. topology never converged)."""

    def __init__(self, message: str, tree_dump: str = "") -> None:
        full: str = f"{message}\n{tree_dump}" if tree_dump else message
        super().__init__(full)
        self.tree_dump: str = tree_dump
