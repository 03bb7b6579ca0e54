import importlib.util
from os import path
from typing import Any, Dict
import appdirs

from . import default_config

CONFIG_DIR = appdirs.user_config_dir("distill")
USER_CONFIG = path.join(CONFIG_DIR, "config.py")


def get_vars(module: Any) -> Dict[str, Any]:
    return {k: v for k, v in vars(module).items() if k.isupper()}


def load_user_config(file: str) -> Dict[str, Any]:
    if not path.isfile(file):
        return {}

    spec = importlib.util.spec_from_file_location("user_config", file)
    if spec is None or spec.loader is None:
        return {}

    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return get_vars(module)


class Config:
    """
    Packaged defaults overridden by the user's config.py
    """

    def __init__(self, user_config: str = USER_CONFIG) -> None:
        self._d = get_vars(default_config)
        self._d.update(load_user_config(user_config))

    def get(self, var: str) -> Any:
        return self._d[var]


config_man = Config()
