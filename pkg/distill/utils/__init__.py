from .conf_reader import config_man
from .log import setup_logging

__all__ = ["config_man", "setup_logging"]
