"""Environment stepping: immutable states, termination flags, wrappers."""

from __future__ import annotations

from dataclasses import dataclass

from ..state import Action, RawState
from .mechanics import family_step
from .spec import EnvError, EnvironmentSpec

__all__ = [
    "EnvState",
    "Environment",
    "SteppedAfterTermination",
    "UnknownAction",
    "action_space",
    "reset",
    "step",
]


class UnknownAction(EnvError):
    pass


class SteppedAfterTermination(EnvError):
    pass


@dataclass(frozen=True)
class EnvState:
    state: RawState
    won: bool = False
    lost: bool = False
    steps: int = 0

    @property
    def terminated(self) -> bool:
        return self.won or self.lost


def action_space(spec: EnvironmentSpec) -> tuple[Action, ...]:
    return spec.actions


def reset(spec: EnvironmentSpec, seed: int = 0) -> EnvState:
    state = spec.initial_state(seed)
    return EnvState(state=state, won=spec.win.holds(state), lost=False, steps=0)


def step(spec: EnvironmentSpec, env_state: EnvState, action: Action) -> EnvState:
    if action not in spec.actions:
        raise UnknownAction(f"{action!r} not in the {spec.mechanics} action space")
    if env_state.terminated:
        raise SteppedAfterTermination("episode already ended")
    after = family_step(spec, env_state.state, action)
    lost = len(after.get(spec.avatar_key) or ()) == 0
    won = not lost and spec.win.holds(after)
    return EnvState(state=after, won=won, lost=lost, steps=env_state.steps + 1)


class Environment:
    """Stateful convenience wrapper over the pure reset/step functions."""

    def __init__(self, spec: EnvironmentSpec, seed: int = 0):
        self.spec = spec
        self.seed = seed
        self._current: EnvState | None = None

    @property
    def current(self) -> EnvState:
        if self._current is None:
            raise EnvError("environment not reset")
        return self._current

    @property
    def state(self) -> RawState:
        return self.current.state

    def reset(self) -> EnvState:
        self._current = reset(self.spec, self.seed)
        return self._current

    def step(self, action: Action) -> EnvState:
        self._current = step(self.spec, self.current, action)
        return self._current

    def actions(self) -> tuple[Action, ...]:
        return self.spec.actions
