"""Generator rows of the easy quantum groups, shipped as JSON files.

Each row lists one-level, all-white generators; the identity-shaped
partition in P(b, w) belongs to every row and is left implicit.
"""
import json
import os
from typing import Dict, List, NamedTuple

from .notation import partition_from_json
from .partition import PartitionError, SpatialPartition, part_id_bw

_PRESET_DIR = os.path.join(os.path.dirname(__file__), "presets")


class UnknownPreset(PartitionError):
    pass


class Preset(NamedTuple):
    name: str
    alias: str
    description: str
    generators: List[SpatialPartition]

    def with_identity(self) -> List[SpatialPartition]:
        """The generators together with the implicit partIdBW."""
        return [part_id_bw(1)] + self.generators


def _read(path: str) -> Preset:
    with open(path, "r") as f:
        obj = json.load(f)
    return Preset(
        obj["name"],
        obj["alias"],
        obj.get("description", ""),
        [partition_from_json(g) for g in obj["generators"]],
    )


def all_presets() -> Dict[str, Preset]:
    """Presets keyed by their ASCII alias, in file name order."""
    presets = {}
    for fname in sorted(os.listdir(_PRESET_DIR)):
        if fname.endswith(".json"):
            preset = _read(os.path.join(_PRESET_DIR, fname))
            presets[preset.alias] = preset
    return presets


def load_preset(name: str) -> Preset:
    """Look a preset up by alias (On, Hn+, Bn#*) or display name (O_n, H_n+)."""
    for preset in all_presets().values():
        if name in (preset.alias, preset.name):
            return preset
    raise UnknownPreset(
        f"unknown preset '{name}', choose one of {', '.join(all_presets())}"
    )
