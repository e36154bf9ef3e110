"""Shared helpers: error hierarchy, MAC formatting, settings and logging setup."""

from .errors import (
    WifixError,
    EncodeError,
    DecodeError,
    ContractViolation,
    AssignmentError,
    ConfigurationError,
    ConsistencyError,
    ScenarioIssue,
    ScenarioError,
    ExperimentError,
)
from .mac_formatter import MacFormatter

__all__ = [
    "WifixError",
    "EncodeError",
    "DecodeError",
    "ContractViolation",
    "AssignmentError",
    "ConfigurationError",
    "ConsistencyError",
    "ScenarioIssue",
    "ScenarioError",
    "ExperimentError",
    "MacFormatter",
]
