"""Logging setup for the command-line entry points"""

import logging
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler

from .config import config


def configure_logging(level: Optional[str] = None, console: Optional[Console] = None) -> None:
    """
    Route library log records through a rich handler

    Args:
        level: Level name (defaults to config.LOG_LEVEL)
        console: Console to render on (defaults to stderr)
    """
    level_name = (level or config.LOG_LEVEL).upper()
    handler = RichHandler(
        console=console or Console(stderr=True),
        show_path=False,
        rich_tracebacks=True,
    )
    logging.basicConfig(
        level=getattr(logging, level_name, logging.WARNING),
        format="%(name)s: %(message)s",
        datefmt="[%X]",
        handlers=[handler],
        force=True,
    )
