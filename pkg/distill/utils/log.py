import logging
from os import environ
from typing import Optional, Union
from rich.console import Console
from rich.logging import RichHandler
from distill.utils.conf_reader import config_man

stderr = Console(stderr=True)


def setup_logging(level: Optional[Union[int, str]] = None) -> None:
    """
    Route the package loggers to stderr through rich
    """

    if level is None:
        level = environ.get("DISTILL_LOG_LEVEL", config_man.get("LOG_LEVEL"))

    if isinstance(level, str):
        level = level.upper()

    handler = RichHandler(console=stderr, show_path=False, markup=False)
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))

    logger = logging.getLogger("distill")
    logger.handlers.clear()
    logger.addHandler(handler)
    logger.setLevel(level)
    logger.propagate = False
