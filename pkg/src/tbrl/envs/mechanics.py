"""True transition dynamics, one pure step function per family.

These are the ground truth the learned models are measured against, so
every rule here is mirrored line for line by the reference programs in
``assets/models/``; equivalence is enforced by exhaustive sweep tests.
"""

from __future__ import annotations

from ..state import Action, RawState, canonicalize
from .spec import EnvironmentSpec

__all__ = ["family_step"]

_ROTATE_LEFT = {(0, 1): (-1, 0), (-1, 0): (0, -1), (0, -1): (1, 0), (1, 0): (0, 1)}
_ROTATE_RIGHT = {(0, 1): (1, 0), (1, 0): (0, -1), (0, -1): (-1, 0), (-1, 0): (0, 1)}
_MOVES = {"up": (0, -1), "down": (0, 1), "left": (-1, 0), "right": (1, 0)}


def family_step(spec: EnvironmentSpec, state: RawState, action: Action) -> RawState:
    return _STEPS[spec.mechanics](spec, state, action)


def _positions(state: RawState, key: str) -> tuple:
    return state.get(key) or ()


def _shift(pos: tuple[int, int], delta: tuple[int, int]) -> tuple[int, int]:
    return (pos[0] + delta[0], pos[1] + delta[1])


def _step_maze(spec: EnvironmentSpec, state: RawState, action: Action) -> RawState:
    avatar = _positions(state, "avatar")
    delta = _MOVES.get(action)
    if not avatar or delta is None:
        return state
    target = _shift(avatar[0], delta)
    if target in _positions(state, "wall"):
        return state
    if target in _positions(state, "trap"):
        return state.replace(avatar=None)
    return state.replace(avatar=[list(target)])


def _step_sokoban(spec: EnvironmentSpec, state: RawState, action: Action) -> RawState:
    avatar = _positions(state, "avatar")
    delta = _MOVES.get(action)
    if not avatar or delta is None:
        return state
    target = _shift(avatar[0], delta)
    walls = _positions(state, "wall")
    if target in walls:
        return state
    boxes = _positions(state, "box")
    changes: dict[str, object] = {"avatar": [list(target)]}
    if target in boxes:
        box_target = _shift(target, delta)
        if box_target in walls or box_target in boxes:
            return state
        remaining = [list(b) for b in boxes if b != target]
        if box_target not in _positions(state, "hole"):
            remaining.append(list(box_target))
        changes["box"] = remaining or None
    return state.replace(**changes)


def _babyai_blocked(state: RawState, pos: tuple[int, int]) -> bool:
    for key, value in state.items():
        if key in ("red_agent", "agent_direction", "agent_carrying"):
            continue
        if key.startswith("open_") or key == "goal":
            continue
        if pos in value:
            return True
    return False


def _babyai_occupied(state: RawState, pos: tuple[int, int]) -> bool:
    for key, value in state.items():
        if key in ("red_agent", "agent_direction", "agent_carrying"):
            continue
        if pos in value:
            return True
    return False


def _step_babyai(spec: EnvironmentSpec, state: RawState, action: Action) -> RawState:
    agent_pos = _positions(state, "red_agent")[0]
    direction = state.get("agent_direction") or (0, 1)
    carrying = list(state.get("agent_carrying") or ())

    if action == "left":
        return state.replace(agent_direction=list(_ROTATE_LEFT[tuple(direction)]))
    if action == "right":
        return state.replace(agent_direction=list(_ROTATE_RIGHT[tuple(direction)]))
    if action == "forward":
        target = _shift(agent_pos, direction)
        if _babyai_blocked(state, target):
            return state
        return state.replace(red_agent=[list(target)])
    if action == "pickup":
        target = _shift(agent_pos, direction)
        for key, value in state.items():
            if "key" in key and target in value:
                remaining = [list(p) for p in value if p != target]
                return state.replace(
                    agent_carrying=carrying + [key],
                    **{key: remaining or None},
                )
        return state
    if action == "toggle":
        target = _shift(agent_pos, direction)
        for door_type in ("closed_", "locked_"):
            for key, value in state.items():
                if key.startswith(door_type) and target in value:
                    color = key.split("_")[1]
                    if door_type == "closed_" or f"{color}_key" in carrying:
                        return state.replace(
                            **{key: None, f"open_{color}_door": [list(p) for p in value]}
                        )
                    break
        return state
    if action == "drop":
        if not carrying:
            return state
        target = _shift(agent_pos, direction)
        if _babyai_occupied(state, target):
            return state
        dropped = carrying[-1]
        return state.replace(agent_carrying=carrying[:-1], **{dropped: [list(target)]})
    return state


def _step_minihack(spec: EnvironmentSpec, state: RawState, action: Action) -> RawState:
    agent = _positions(state, "agent")
    delta = _MOVES.get(action)
    if not agent or delta is None:
        return state
    target = _shift(agent[0], delta)
    if target in _positions(state, "wall") or target in _positions(state, "monster"):
        return state
    if target in _positions(state, "trap"):
        return state.replace(agent=None)
    return state.replace(agent=[list(target)])


def _step_minihack_wod(spec: EnvironmentSpec, state: RawState, action: Action) -> RawState:
    agent = _positions(state, "agent")
    if not agent:
        return state
    carrying = list(state.get("agent_carrying") or ())
    sequence = list(state.get("zap_sequence") or ())
    kill_range = int(spec.params.get("kill_range", 5))

    delta = _MOVES.get(action)
    if delta is not None:
        target = _shift(agent[0], delta)
        changes: dict[str, object] = {"zap_sequence": []}
        if target in _positions(state, "wall") or target in _positions(state, "minotaur"):
            return state.replace(**changes)
        if target in _positions(state, "wand"):
            changes["agent_carrying"] = carrying + ["wand"]
            changes["wand"] = None
        changes["agent"] = [list(target)]
        return state.replace(**changes)

    if action == "zap":
        return state.replace(zap_sequence=["zap"] if "wand" in carrying else [])
    if action == "select_f":
        armed = sequence == ["zap"]
        return state.replace(zap_sequence=["zap", "select_f"] if armed else [])
    if action.startswith("shoot_"):
        changes = {"zap_sequence": []}
        if sequence == ["zap", "select_f"]:
            aim = _MOVES[action.removeprefix("shoot_")]
            beam = agent[0]
            for _ in range(kill_range):
                beam = _shift(beam, aim)
                if beam in _positions(state, "wall"):
                    break
                if beam in _positions(state, "minotaur"):
                    changes["minotaur"] = None
                    break
        return state.replace(**changes)
    return state


_STEPS = {
    "labyrinth": _step_maze,
    "maze": _step_maze,
    "sokoban": _step_sokoban,
    "babyai": _step_babyai,
    "minihack": _step_minihack,
    "minihack_wod": _step_minihack_wod,
}
