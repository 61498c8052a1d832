"""Bundled text assets: prompt templates, reference programs, PDDL files,
domain descriptions."""

from importlib import resources
from pathlib import Path


def asset_path(*parts: str) -> Path:
    return Path(resources.files(__package__).joinpath(*parts))  # type: ignore[arg-type]


def read_asset(*parts: str) -> str:
    return asset_path(*parts).read_text(encoding="utf-8")


def list_assets(*parts: str) -> list[str]:
    return sorted(p.name for p in asset_path(*parts).iterdir() if p.is_file())
