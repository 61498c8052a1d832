"""Environment specs, win conditions, and level fixture loading.

A level fixture is a text file: header lines (``key: value``), a ``---``
separator, then a state document in the standard interchange format.
Generated families (the multi-room pickup+unlock level) omit the state
section and build their layout as a pure function of the seed.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from ..assets import read_asset
from ..state import Action, RawState, canonicalize, deserialize

__all__ = [
    "EnvError",
    "EnvironmentSpec",
    "InvalidLevel",
    "WinCondition",
    "load_level",
    "parse_level",
]

FAMILIES = ("labyrinth", "maze", "sokoban", "babyai", "minihack")

ACTION_SPACES = {
    "labyrinth": ("up", "down", "left", "right"),
    "maze": ("up", "down", "left", "right"),
    "sokoban": ("up", "down", "left", "right"),
    "babyai": ("left", "right", "forward", "pickup", "drop", "toggle"),
    "minihack": ("up", "down", "left", "right"),
    "minihack_wod": (
        "up",
        "down",
        "left",
        "right",
        "zap",
        "select_f",
        "shoot_up",
        "shoot_down",
        "shoot_left",
        "shoot_right",
    ),
}

AVATAR_KEYS = {
    "labyrinth": "avatar",
    "maze": "avatar",
    "sokoban": "avatar",
    "babyai": "red_agent",
    "minihack": "agent",
    "minihack_wod": "agent",
}

_DEFAULT_WINS = {
    "labyrinth": "reach avatar goal",
    "maze": "reach avatar goal",
    "sokoban": "absent box",
    "minihack": "reach agent downstairs",
    "minihack_wod": "absent minotaur",
}

_DESCRIPTION_ASSETS = {
    "labyrinth": "maze.txt",
    "maze": "maze.txt",
    "sokoban": "sokoban.txt",
    "babyai": "babyai.txt",
    "minihack": "minihack_nav.txt",
    "minihack_wod": "minihack_wod.txt",
}


class EnvError(Exception):
    pass


class InvalidLevel(EnvError):
    pass


@dataclass(frozen=True)
class WinCondition:
    """Win test over raw states: reach A B | absent K | exists K | carrying N."""

    kind: str
    args: tuple[str, ...]

    @classmethod
    def parse(cls, text: str) -> "WinCondition":
        words = text.split()
        if not words:
            raise InvalidLevel("empty win condition")
        kind, args = words[0], tuple(words[1:])
        expected = {"reach": 2, "absent": 1, "exists": 1, "carrying": 1}.get(kind)
        if expected is None:
            raise InvalidLevel(f"unknown win condition {kind!r}")
        if len(args) != expected:
            raise InvalidLevel(f"win condition {kind!r} takes {expected} arguments")
        return cls(kind, args)

    def holds(self, state: RawState) -> bool:
        if self.kind == "reach":
            a = state.get(self.args[0]) or ()
            b = state.get(self.args[1]) or ()
            return any(pos in b for pos in a)
        if self.kind == "absent":
            value = state.get(self.args[0])
            return value is None or len(value) == 0
        if self.kind == "exists":
            value = state.get(self.args[0])
            return value is not None and len(value) > 0
        carrying = state.get("agent_carrying") or ()
        return self.args[0] in carrying

    def text(self) -> str:
        return " ".join((self.kind,) + self.args)


@dataclass(frozen=True)
class EnvironmentSpec:
    family: str
    name: str
    win: WinCondition
    layout: RawState | None = None
    variant: str = ""
    generator: str = ""
    grid: tuple[int, int] | None = None
    params: dict = field(default_factory=dict, compare=False)

    @property
    def mechanics(self) -> str:
        """Dynamics key; the wand variant has its own rules and model."""
        if self.family == "minihack" and self.variant == "wod":
            return "minihack_wod"
        return self.family

    @property
    def actions(self) -> tuple[Action, ...]:
        return ACTION_SPACES[self.mechanics]

    @property
    def avatar_key(self) -> str:
        return AVATAR_KEYS[self.mechanics]

    @property
    def domain_description(self) -> str:
        return read_asset("descriptions", _DESCRIPTION_ASSETS[self.mechanics]).strip()

    def initial_state(self, seed: int) -> RawState:
        if self.generator:
            state = _GENERATORS[self.generator](self, seed)
        else:
            assert self.layout is not None
            state = self.layout
        _check_layout(self, state)
        return state


def parse_level(text: str, name: str = "level") -> EnvironmentSpec:
    """Parse a level fixture document."""
    if "---" in text:
        header_text, _, state_text = text.partition("---")
    else:
        header_text, state_text = text, ""
    header: dict[str, object] = {}
    for line in header_text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise InvalidLevel(f"bad header line {line!r}")
        key, _, value = line.partition(":")
        value = value.strip()
        header[key.strip()] = json.loads(value) if value[:1] in "[{0123456789" else value

    family = str(header.get("family", ""))
    if family not in FAMILIES:
        raise InvalidLevel(f"unknown family {family!r}")
    variant = str(header.get("variant", ""))
    generator = str(header.get("generator", ""))
    grid = tuple(header["grid"]) if "grid" in header else None  # type: ignore[arg-type]
    mechanics = "minihack_wod" if family == "minihack" and variant == "wod" else family
    win_text = str(header.get("win", "")) or _DEFAULT_WINS.get(mechanics, "")
    if not win_text:
        raise InvalidLevel(f"family {family!r} requires an explicit win condition")
    params = {
        k: v
        for k, v in header.items()
        if k not in ("family", "variant", "generator", "grid", "win", "name")
    }

    layout = None
    if state_text.strip():
        layout = deserialize(state_text.lstrip("\n"))
    elif not generator:
        raise InvalidLevel("level has neither a state section nor a generator")

    return EnvironmentSpec(
        family=family,
        name=str(header.get("name", name)),
        win=WinCondition.parse(win_text),
        layout=layout,
        variant=variant,
        generator=generator,
        grid=grid,  # type: ignore[arg-type]
        params=params,
    )


def load_level(path: str | Path) -> EnvironmentSpec:
    path = Path(path)
    if not path.exists():
        raise InvalidLevel(f"level file not found: {path}")
    return parse_level(path.read_text(encoding="utf-8"), name=path.stem)


def _check_layout(spec: EnvironmentSpec, state: RawState) -> None:
    avatar = state.get(spec.avatar_key)
    if avatar is None or len(avatar) != 1:
        raise InvalidLevel(f"level needs exactly one {spec.avatar_key!r} position")
    if spec.grid is not None:
        w, h = spec.grid
        for key, value in state.items():
            if key in ("agent_direction", "agent_carrying", "zap_sequence"):
                continue
            for pos in value:
                if isinstance(pos, tuple):
                    x, y = pos
                    if not (0 <= x < w and 0 <= y < h):
                        raise InvalidLevel(f"{key} at {list(pos)} outside {w}x{h} grid")


# ---------------------------------------------------------------------------
# Seeded generators


def _generate_boss(spec: EnvironmentSpec, seed: int) -> RawState:
    """Two rooms split by a wall with one locked door; key on the agent's
    side, goal on the far side.  Layout is a pure function of the seed."""
    w, h = spec.grid or (8, 6)
    rng = random.Random(seed)
    color = rng.choice(["blue", "red", "green", "purple"])
    divider = w // 2
    walls = [(x, y) for x in range(w) for y in range(h) if x in (0, w - 1) or y in (0, h - 1)]
    door_y = rng.randrange(1, h - 1)
    walls += [(divider, y) for y in range(1, h - 1) if y != door_y]

    left_cells = [(x, y) for x in range(1, divider) for y in range(1, h - 1)]
    right_cells = [(x, y) for x in range(divider + 1, w - 1) for y in range(1, h - 1)]
    agent = rng.choice(left_cells)
    key = rng.choice([c for c in left_cells if c != agent])
    goal = rng.choice(right_cells)
    direction = rng.choice([[0, -1], [0, 1], [-1, 0], [1, 0]])

    return canonicalize(
        {
            "red_agent": [list(agent)],
            "agent_direction": direction,
            "agent_carrying": [],
            "grey_wall": [list(c) for c in walls],
            f"locked_{color}_door": [[divider, door_y]],
            f"{color}_key": [list(key)],
            "goal": [list(goal)],
        }
    )


_GENERATORS = {"boss": _generate_boss}
