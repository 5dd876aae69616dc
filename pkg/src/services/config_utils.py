import json
import os
from typing import Any

from data.default_data import CONFIG_FILE, DEFAULT_CONFIG as DC, THREADS_ENV
from services.errors import DataError

_MISSING = object()


def _lookup(tree: dict, key: str) -> Any:
    node: Any = tree
    for part in key.split("."):
        if not isinstance(node, dict) or part not in node:
            return _MISSING
        node = node[part]
    return node


class Settings:
    """
    Run settings read with dotted keys, such as ``settings["census.seed"]``.
    """

    def __init__(self, config: dict | None = None):
        self.config: dict = config or {}

    def __getitem__(self, key: str) -> Any:
        """
        Gets a value from the settings.
        Args:
            key (str): Dotted key to retrieve.
        Returns:
            The value from the loaded configuration, the value from
            DEFAULT_CONFIG if the key is not found or None if the key is not
            in DEFAULT_CONFIG either.
        """
        value = _lookup(self.config, key)
        if value is _MISSING:
            value = _lookup(DC, key)
        return None if value is _MISSING else value

    def update(self, data: dict[str, Any]):
        """
        Overrides settings with the provided dotted keys; None values are ignored.
        Args:
            data (dict[str, Any]): Dotted keys and their values.
        """
        for key, value in data.items():
            if value is None:
                continue
            *parents, leaf = key.split(".")
            node = self.config
            for part in parents:
                node = node.setdefault(part, {})
            node[leaf] = value
        return self

    def threads(self, flag: int | None = None) -> int:
        """
        Worker count: the flag, then the environment, then the configuration.
        Raises:
            DataError: If the environment value is not a positive integer.
        """
        if flag is not None:
            count = flag
        elif os.environ.get(THREADS_ENV):
            raw = os.environ[THREADS_ENV]
            try:
                count = int(raw)
            except ValueError:
                raise DataError(f"{THREADS_ENV}='{raw}' is not an integer")
        else:
            count = int(self["threads"])
        if count < 1:
            raise DataError(f"The thread count must be positive, got {count}")
        return count


def load_config(path: str) -> dict:
    """
    Loads the configuration from a JSON file.
    Args:
        path (str): The path to the configuration file.
    Returns:
        dict: A dictionary with the configuration data.
    Raises:
        FileNotFoundError: If the configuration file does not exist.
        DataError: If the configuration file is not valid.
    """
    if not path:
        return {}
    try:
        with open(path, "r") as config_file:
            result = json.load(config_file)
    except FileNotFoundError:
        raise FileNotFoundError(f"The configuration file '{path}' does not exist.")
    except json.JSONDecodeError:
        raise DataError(f"The configuration file '{path}' is not a valid JSON file.")
    if not isinstance(result, dict):
        raise DataError(f"The configuration file '{path}' does not hold a JSON object.")
    return result


def config_path(path: str | None) -> str:
    """The given path, or config.json in the working directory when it exists."""
    if path is not None:
        return path
    return CONFIG_FILE if os.path.isfile(CONFIG_FILE) else ""


def load_settings(path: str | None) -> Settings:
    return Settings(load_config(config_path(path)))


def save_config(config: dict, path: str) -> str:
    """
    Saves the configuration to a JSON file.
    Args:
        config (dict): The configuration data to save.
        path (str): The path to save the configuration file.
    Returns:
        str: A message indicating the result of the save operation.
    """
    if not path:
        return "No path provided"
    try:
        with open(path, "w") as config_file:
            json.dump(config, config_file, indent=4)
        return "Configuration saved"
    except IOError:
        return "Failed to save the configuration"
