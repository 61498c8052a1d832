import re

import pytest

from tbrl.envs import (
    ACTION_SPACES,
    Environment,
    InvalidLevel,
    OracleUnsolvable,
    SteppedAfterTermination,
    UnknownAction,
    enumerate_reachable,
    load_level,
    oracle_solve,
    parse_level,
    render_ascii,
    reset,
    step,
)
from tbrl.state import serialize

from .util import LEVELS, is_terminal, level, reference_model, sweep_equivalence


# --- specs and loading ---------------------------------------------------------


def test_load_sokoban_fixture():
    spec = level("sokoban", "push_7x7.lvl")
    start = reset(spec, seed=0)
    assert set(start.state.keys()) == {"avatar", "box", "hole", "wall"}
    assert start.state["avatar"] == ((2, 2),)


def test_reset_deterministic():
    spec = level("babyai", "boss.lvl")
    assert reset(spec, seed=3) == reset(spec, seed=3)


def test_boss_generator_varies_layout_not_vocabulary():
    spec = level("babyai", "boss.lvl")
    a, b = reset(spec, seed=1).state, reset(spec, seed=2).state
    assert a != b

    def vocab(state):
        return {re.sub(r"(blue|red|green|purple)", "C", k) for k in state.keys()}

    assert vocab(a) == vocab(b)


def test_boss_levels_are_solvable():
    spec = level("babyai", "boss.lvl")
    for seed in (1, 2, 3):
        actions = oracle_solve(spec, seed=seed, max_nodes=100_000)
        env = Environment(spec, seed=seed)
        env.reset()
        for action in actions:
            env.step(action)
        assert env.current.won


def test_missing_level_file():
    with pytest.raises(InvalidLevel):
        load_level(LEVELS / "maze" / "nope.lvl")


def test_level_requires_single_avatar():
    with pytest.raises(InvalidLevel):
        spec = parse_level("family: maze\n---\ngoal: [[1,1]]\nwall: []\n")
        reset(spec, 0)


def test_action_spaces():
    assert ACTION_SPACES["maze"] == ("up", "down", "left", "right")
    assert ACTION_SPACES["babyai"] == ("left", "right", "forward", "pickup", "drop", "toggle")
    wod = level("minihack", "wod_9x5.lvl")
    for action in ("zap", "select_f", "shoot_up", "shoot_down", "shoot_left", "shoot_right"):
        assert action in wod.actions


# --- stepping ------------------------------------------------------------------


def test_maze_wall_blocks_and_goal_wins():
    spec = level("maze", "open_3x3.lvl")
    start = reset(spec, 0)
    blocked = step(spec, start, "up")
    assert blocked.state == start.state
    won = step(spec, start, "right")
    assert won.won and not won.lost


def test_maze_trap_kills():
    spec = level("maze", "trap_maze.lvl")
    env = Environment(spec)
    env.reset()
    for action in ("right", "right", "right"):
        result = env.step(action)
    assert result.lost and not result.won
    assert "avatar" not in result.state


def test_sokoban_push_box_into_hole():
    spec = level("sokoban", "push_7x7.lvl")
    env = Environment(spec)
    env.reset()
    env.step("right")  # stand above the box column
    mid = env.step("down")  # push box one cell down
    assert mid.state["box"] == ((3, 4),)
    final = env.step("down")  # push into the hole
    assert "box" not in final.state
    assert final.won


def test_sokoban_conservation():
    spec = level("sokoban", "push_7x7.lvl")
    start = reset(spec, 0)
    walls = start.state["wall"]
    for state in enumerate_reachable(spec):
        assert state["wall"] == walls
        assert len(state.get("box") or ()) <= 1


def test_babyai_pickup_requires_facing():
    spec = level("babyai", "pickup_5x5.lvl")
    env = Environment(spec)
    env.reset()  # agent (1,1) facing down, key at (3,3)
    nothing = env.step("pickup")
    assert nothing.state.get("agent_carrying") == ()
    env.step("forward")  # (1,2)
    env.step("forward")  # (1,3)
    env.step("right")  # [0,1] -> [1,0] per the rotation table
    env.step("forward")  # (2,3), key ahead
    done = env.step("pickup")
    assert done.state["agent_carrying"] == ("blue_key",)
    assert "blue_key" not in done.state
    assert done.won


def test_babyai_locked_door_blocks_until_unlocked():
    spec = level("babyai", "unlock_6x6.lvl")
    env = Environment(spec)
    env.reset()  # agent (1,1) facing down, key (1,3), door (3,2)
    env.step("forward")
    env.step("forward")  # (1,3) is the key cell? no: blocked by key
    assert env.state["red_agent"] == ((1, 2),)
    picked = env.step("pickup")
    assert picked.state["agent_carrying"] == ("blue_key",)
    env.step("right")  # [0,1] -> [1,0]: face east
    env.step("forward")  # (2,2)
    blocked = env.step("forward")  # door ahead at (3,2), locked
    assert blocked.state["red_agent"] == ((2, 2),)
    opened = env.step("toggle")
    assert opened.state["open_blue_door"] == ((3, 2),)
    assert opened.won
    with pytest.raises(SteppedAfterTermination):
        env.step("forward")


def test_wod_kill_sequence():
    spec = level("minihack", "wod_9x5.lvl")
    env = Environment(spec)
    env.reset()
    env.step("right")  # walk onto the wand cell
    assert env.state["agent_carrying"] == ("wand",)
    assert "wand" not in env.state
    env.step("zap")
    assert env.state["zap_sequence"] == ("zap",)
    env.step("select_f")
    final = env.step("shoot_right")
    assert "minotaur" not in final.state
    assert final.won


def test_wod_sequence_resets_on_movement():
    spec = level("minihack", "wod_9x5.lvl")
    env = Environment(spec)
    env.reset()
    env.step("right")
    env.step("zap")
    env.step("up")  # breaks the sequence
    assert env.state["zap_sequence"] == ()
    env.step("select_f")
    assert env.state["zap_sequence"] == ()


def test_unknown_action_rejected():
    spec = level("maze", "open_3x3.lvl")
    with pytest.raises(UnknownAction):
        step(spec, reset(spec, 0), "toggle")


# --- oracle ---------------------------------------------------------------------


def test_oracle_adjacent_goal():
    actions = oracle_solve(level("maze", "open_3x3.lvl"))
    assert actions == ["right"]


def test_oracle_solution_executes_to_win():
    for family, name in [
        ("labyrinth", "corridor.lvl"),
        ("maze", "maze_5x5.lvl"),
        ("maze", "trap_maze.lvl"),
        ("sokoban", "push_7x7.lvl"),
        ("babyai", "unlock_6x6.lvl"),
        ("minihack", "traps_7x7.lvl"),
        ("minihack", "monster_7x7.lvl"),
        ("minihack", "wod_9x5.lvl"),
    ]:
        spec = level(family, name)
        actions = oracle_solve(spec)
        env = Environment(spec)
        env.reset()
        for action in actions:
            env.step(action)
        assert env.current.won, f"{family}/{name}"


def test_oracle_unsolvable():
    with pytest.raises(OracleUnsolvable):
        oracle_solve(level("maze", "walled_goal.lvl"))


def test_replay_reproduces_identical_traces():
    spec = level("sokoban", "push_7x7.lvl")
    actions = oracle_solve(spec)

    def trace():
        env = Environment(spec)
        env.reset()
        docs = [serialize(env.state)]
        for action in actions:
            env.step(action)
            docs.append(serialize(env.state))
        return "".join(docs)

    assert trace() == trace()


# --- vocabulary ------------------------------------------------------------------

_VOCAB = {
    "labyrinth": r"avatar|goal|wall|trap",
    "maze": r"avatar|goal|wall|trap",
    "sokoban": r"avatar|box|hole|wall",
    "babyai": r"red_agent|agent_direction|agent_carrying|grey_wall|goal"
    r"|(blue|red|green|purple)_key|(locked|closed|open)_(blue|red|green|purple)_door",
    "minihack": r"agent|downstairs|wall|trap|monster",
    "minihack_wod": r"agent|agent_carrying|zap_sequence|wall|wand|minotaur",
}


@pytest.mark.parametrize(
    "family,name",
    [
        ("labyrinth", "corridor.lvl"),
        ("maze", "trap_maze.lvl"),
        ("sokoban", "push_7x7.lvl"),
        ("babyai", "unlock_6x6.lvl"),
        ("minihack", "traps_7x7.lvl"),
        ("minihack", "wod_9x5.lvl"),
    ],
)
def test_vocabulary_drift(family, name):
    spec = level(family, name)
    pattern = re.compile(rf"^({_VOCAB[spec.mechanics]})$")
    for state in enumerate_reachable(spec):
        for key in state.keys():
            assert pattern.match(key), f"undocumented key {key!r}"


# --- reference model equivalence --------------------------------------------------


@pytest.mark.parametrize(
    "family,name,model",
    [
        ("labyrinth", "corridor.lvl", "maze.wmdsl"),
        ("maze", "trap_maze.lvl", "maze.wmdsl"),
        ("maze", "maze_5x5.lvl", "maze.wmdsl"),
        ("sokoban", "push_7x7.lvl", "sokoban.wmdsl"),
        ("babyai", "pickup_5x5.lvl", "babyai.wmdsl"),
        ("minihack", "traps_7x7.lvl", "minihack_nav.wmdsl"),
        ("minihack", "monster_7x7.lvl", "minihack_nav.wmdsl"),
        ("minihack", "wod_9x5.lvl", "minihack_wod.wmdsl"),
    ],
)
def test_reference_models_match_simulator_exhaustively(family, name, model):
    checked = sweep_equivalence(level(family, name), reference_model(model))
    assert checked > 0


def test_render_ascii_smoke():
    spec = level("sokoban", "push_7x7.lvl")
    art = render_ascii(spec, reset(spec, 0).state)
    assert "@" in art and "B" in art and "#" in art


def test_trap_maze_sweep_includes_death_prediction():
    spec = level("maze", "trap_maze.lvl")
    model = reference_model("maze.wmdsl")
    states = [s for s in enumerate_reachable(spec) if not is_terminal(spec, s)]
    assert any(s["avatar"] == ((3, 1),) for s in states)  # cell before the trap
    sweep_equivalence(spec, model)
