"""Root logger configuration for the command line."""

from __future__ import annotations

import logging

LOG_FORMAT: str = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"
CONSOLE_FORMAT: str = "%(levelname)s %(name)s: %(message)s"


def configure_logging(verbose: bool = False, log_file: str | None = None) -> None:
    """DEBUG with ``verbose``, WARNING otherwise; optionally mirrored to a file."""
    level: int = logging.DEBUG if verbose else logging.WARNING
    root: logging.Logger = logging.getLogger()
    root.setLevel(level)
    for handler in list(root.handlers):
        root.removeHandler(handler)

    console = logging.StreamHandler()
    console.setFormatter(logging.Formatter(CONSOLE_FORMAT))
    root.addHandler(console)

    if log_file:
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(file_handler)
