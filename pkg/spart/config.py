import os
from pathlib import Path
from typing import Any, Optional

from dotenv import load_dotenv

from . import cache

load_dotenv()

# General config
SPART_WORKING_DIR = os.environ.get(
    "SPART_WORKING_DIR", os.path.join(Path.home(), ".spart")
)
CLOSURE_CACHE_PREFIX = "closure-"

# Defaults: CLI flag > environment > persisted value > built-in
DEFAULTS = {"bound": 6, "threads": 1, "verbose": False}

_TRUE = ("1", "true", "yes", "on")


def _coerce(key: str, value: Any) -> Any:
    if key == "verbose":
        return value if isinstance(value, bool) else str(value).lower() in _TRUE
    try:
        value = int(value)
    except (TypeError, ValueError):
        raise ValueError(f"'{key}' takes an integer, got '{value}'")
    if value < 1:
        raise ValueError(f"'{key}' must be positive, got {value}")
    return value


def set_default(key: str, value: Any):
    """Persist a default for later CLI runs."""
    if key not in DEFAULTS:
        raise KeyError(key)
    cache.store(key, _coerce(key, value))


def get_default(key: str, flag: Optional[Any] = None) -> Any:
    """Resolve a setting from the flag, the environment, the cache, then DEFAULTS."""
    if key not in DEFAULTS:
        raise KeyError(key)
    if flag is not None:
        return flag
    env = os.environ.get(f"SPART_{key.upper()}")
    if env is not None:
        return _coerce(key, env)
    stored = cache.get(key)
    if stored is not None:
        return _coerce(key, stored)
    return DEFAULTS[key]
