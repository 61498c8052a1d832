"""Shared helpers for the test suite."""

from __future__ import annotations

from pathlib import Path

from tbrl.assets import read_asset
from tbrl.envs import EnvironmentSpec, enumerate_reachable, family_step, load_level
from tbrl.state import RawState
from tbrl.wmdsl import parse_program, run_transition

REPO = Path(__file__).resolve().parent.parent
LEVELS = REPO / "levels"
CASSETTES = REPO / "cassettes"
CONFIGS = REPO / "configs"


def level(family: str, name: str) -> EnvironmentSpec:
    return load_level(LEVELS / family / name)


def reference_model(name: str):
    return parse_program(read_asset("models", name), "transition")


def is_terminal(spec: EnvironmentSpec, state: RawState) -> bool:
    lost = len(state.get(spec.avatar_key) or ()) == 0
    return lost or spec.win.holds(state)


def sweep_equivalence(spec: EnvironmentSpec, model, seed: int = 0) -> int:
    """Compare the true dynamics against a transition program on every
    reachable (state, action) pair; returns the number of pairs checked."""
    checked = 0
    for state in enumerate_reachable(spec, seed=seed):
        if is_terminal(spec, state):
            continue
        for action in spec.actions:
            truth = family_step(spec, state, action)
            predicted = run_transition(model, state, action)
            assert predicted == truth, (
                f"model diverges on action {action!r}\nstate:\n{state}\n"
                f"truth: {truth}\npredicted: {predicted}"
            )
            checked += 1
    return checked
