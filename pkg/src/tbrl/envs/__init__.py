"""Deterministic native grid-game environments with a brute-force oracle."""

from .core import (
    EnvState,
    Environment,
    SteppedAfterTermination,
    UnknownAction,
    action_space,
    reset,
    step,
)
from .mechanics import family_step
from .oracle import OracleBudget, OracleUnsolvable, enumerate_reachable, oracle_solve
from .render import render_ascii
from .spec import (
    ACTION_SPACES,
    AVATAR_KEYS,
    FAMILIES,
    EnvError,
    EnvironmentSpec,
    InvalidLevel,
    WinCondition,
    load_level,
    parse_level,
)

__all__ = [
    "ACTION_SPACES",
    "AVATAR_KEYS",
    "FAMILIES",
    "EnvError",
    "EnvState",
    "Environment",
    "EnvironmentSpec",
    "InvalidLevel",
    "OracleBudget",
    "OracleUnsolvable",
    "SteppedAfterTermination",
    "UnknownAction",
    "WinCondition",
    "action_space",
    "enumerate_reachable",
    "family_step",
    "load_level",
    "oracle_solve",
    "parse_level",
    "render_ascii",
    "reset",
    "step",
]
