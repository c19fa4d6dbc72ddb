"""Implements a simple persistent file-store cache.

Values set using this cache will persist across CLI command invocations.
They are stored as JSON, one file per key.
"""

import hashlib
import json
import os
from typing import Any, Optional


def _cache_dir():
    """Hack to prevent circular imports issue with the config module"""
    from .config import SPART_WORKING_DIR

    return SPART_WORKING_DIR


def _key_path(key: str) -> str:
    return os.path.join(_cache_dir(), key)


def store(key: str, value: Any):
    """Persist a value across CLI commands."""
    cdir = _cache_dir()
    # Create the cache directory if it doesn't exist
    os.makedirs(cdir, exist_ok=True)

    with open(_key_path(key), "w") as cache:
        json.dump(value, cache)


def get(key: str) -> Optional[Any]:
    """Try to get a value for the given key"""
    key_path = _key_path(key)

    if not os.path.exists(key_path):
        return None

    with open(key_path, "r") as value:
        try:
            return json.load(value)
        except json.JSONDecodeError:
            return None


def digest(obj: Any) -> str:
    """A stable key for a JSON-serializable object."""
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:24]
