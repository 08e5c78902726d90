"""Shipped data files: the default torus configuration and the JSON schemas."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .torus import TorusConfig

DEFAULT_CONFIG = "bl3p2_default.json"


def _read(package: str, name: str) -> str:
    return resources.files(package).joinpath(name).read_text(encoding="utf-8")


def default_config_document() -> dict:
    return json.loads(_read("toric_hms.data", DEFAULT_CONFIG))


def load_default_config() -> TorusConfig:
    return TorusConfig.from_json(default_config_document())


def load_config(source: str) -> TorusConfig:
    """``default`` names the shipped configuration, anything else is a path."""
    if source == "default":
        return load_default_config()
    return TorusConfig.from_json(json.loads(Path(source).read_text(encoding="utf-8")))


def schema_names() -> list[str]:
    root = resources.files("toric_hms.schemas")
    return sorted(p.name[: -len(".schema.json")] for p in root.iterdir() if p.name.endswith(".schema.json"))


def load_schema(name: str) -> dict:
    return json.loads(_read("toric_hms.schemas", f"{name}.schema.json"))
