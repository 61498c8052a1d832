"""Curriculum configuration: versioned JSON schema, strict about keys."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..agent import AgentConfig

__all__ = ["ClientConfig", "ConfigError", "CurriculumConfig", "Episode", "load_config", "shuffle_ablation"]

SCHEMA_VERSION = 1


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class Episode:
    level: str
    seed: int = 0


@dataclass(frozen=True)
class ClientConfig:
    mode: str = "scripted"  # scripted | replay | live
    cassette: str = ""
    record: str = ""
    model: str = "default"

    def __post_init__(self) -> None:
        if self.mode not in ("scripted", "replay", "live"):
            raise ConfigError(f"unknown client mode {self.mode!r}")
        if self.mode == "replay" and not self.cassette:
            raise ConfigError("replay mode needs a cassette path")


@dataclass(frozen=True)
class CurriculumConfig:
    episodes: tuple[Episode, ...]
    mode: str = "full"
    client: ClientConfig = field(default_factory=ClientConfig)
    agent: AgentConfig = field(default_factory=AgentConfig)
    library_out: str = ""
    base_dir: Path = field(default=Path("."), compare=False)

    def resolve(self, path: str) -> Path:
        p = Path(path)
        return p if p.is_absolute() else self.base_dir / p


_BUDGET_KEYS = {
    "repair": "repair_budget",
    "revisions": "revision_budget",
    "explorations": "exploration_budget",
    "random_actions": "random_actions",
    "bfs_nodes": "bfs_node_budget",
    "plan_nodes": "plan_node_budget",
    "step_budget": "step_budget",
}


def _check_keys(obj: dict, allowed: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {', '.join(sorted(unknown))}")


def parse_config(data: dict, base_dir: Path) -> CurriculumConfig:
    _check_keys(
        data, {"version", "mode", "client", "budgets", "episodes", "library_out"}, "config"
    )
    if data.get("version") != SCHEMA_VERSION:
        raise ConfigError(f"config version must be {SCHEMA_VERSION}")
    mode = data.get("mode", "full")
    if mode not in ("full", "no-curriculum", "flat"):
        raise ConfigError(f"unknown mode {mode!r}")

    client_data = dict(data.get("client", {}))
    _check_keys(client_data, {"mode", "cassette", "record", "model"}, "client")
    client = ClientConfig(**client_data)

    budgets = dict(data.get("budgets", {}))
    _check_keys(budgets, set(_BUDGET_KEYS), "budgets")
    agent_kwargs = {_BUDGET_KEYS[k]: int(v) for k, v in budgets.items()}
    agent = AgentConfig(mode=mode, **agent_kwargs)

    episodes_data = data.get("episodes", [])
    if not episodes_data:
        raise ConfigError("config lists no episodes")
    episodes = []
    for i, row in enumerate(episodes_data):
        _check_keys(dict(row), {"level", "seed"}, f"episodes[{i}]")
        if "level" not in row:
            raise ConfigError(f"episodes[{i}] has no level")
        episodes.append(Episode(level=row["level"], seed=int(row.get("seed", 0))))

    config = CurriculumConfig(
        episodes=tuple(episodes),
        mode=mode,
        client=client,
        agent=agent,
        library_out=str(data.get("library_out", "")),
        base_dir=base_dir,
    )
    for episode in config.episodes:
        path = config.resolve(episode.level)
        if not path.exists():
            raise ConfigError(f"level file not found: {path}")
    if client.mode == "replay" and not config.resolve(client.cassette).exists():
        raise ConfigError(f"cassette not found: {config.resolve(client.cassette)}")
    return config


def load_config(path: str | Path) -> CurriculumConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return parse_config(data, base_dir=path.resolve().parent)


def shuffle_ablation(config: CurriculumConfig, seed: int) -> CurriculumConfig:
    """Deterministic permutation of the episode order."""
    if len(config.episodes) < 2:
        raise ConfigError("shuffling needs at least 2 episodes")
    episodes = list(config.episodes)
    random.Random(seed).shuffle(episodes)
    return replace(config, episodes=tuple(episodes))
