from appdirs import AppDirs  # type: ignore
from pathlib import Path
from typing import Any
import copy
import json
import logging
import os

from opcoact.utils.errors import InputError

log = logging.getLogger(__name__)

user_data_dir = Path(AppDirs("opcoact", "opcoact").user_data_dir)
CONFIG_JSON = user_data_dir / Path("config.json")

BUDGET_ENV = "OPCOACT_BUDGET"

DEFAULT_CONFIG: dict[str, Any] = {
    "order": "degrevlex",
    "max_arity": None,
    "max_tree_nodes": 3,
    "budget": {"max_basis_size": 2000, "max_reduction_steps": 500000},
    "format": "json",
}


def check_user_data_dir() -> None:
    """Check if the user data directory exists and create it if it doesn't."""
    user_data_dir.mkdir(parents=True, exist_ok=True)


def check_config_json() -> None:
    """Check if the config JSON file exists and create it if it doesn't."""
    check_user_data_dir()
    if not CONFIG_JSON.exists():
        with CONFIG_JSON.open("w") as f:
            json.dump(DEFAULT_CONFIG, f, indent=2)


def load_config() -> dict[str, Any]:
    """Load the user config merged over the defaults, then apply the budget environment override.

    Raises:
        InputError: If the config file is not valid JSON or the environment override is malformed.

    Returns:
        dict[str, Any]: The effective configuration.
    """
    merged = copy.deepcopy(DEFAULT_CONFIG)
    if CONFIG_JSON.exists():
        try:
            with CONFIG_JSON.open() as f:
                stored = json.load(f)
        except json.JSONDecodeError as exc:
            raise InputError(f"Config file {CONFIG_JSON} is not valid JSON: {exc}") from exc
        for key, value in stored.items():
            if key == "budget" and isinstance(value, dict):
                merged["budget"].update(value)
            else:
                merged[key] = value
    override = os.environ.get(BUDGET_ENV)
    if override is not None:
        try:
            steps = int(override)
        except ValueError as exc:
            raise InputError(f"{BUDGET_ENV} must be a positive integer, got {override!r}.") from exc
        if steps <= 0:
            raise InputError(f"{BUDGET_ENV} must be a positive integer, got {override!r}.")
        log.debug("Reduction step cap overridden from %s: %d", BUDGET_ENV, steps)
        merged["budget"]["max_reduction_steps"] = steps
    return merged
