import pytest

from tbrl.assets import read_asset
from tbrl.state import canonicalize
from tbrl.wmdsl import (
    DIRECTIONS,
    DslSyntaxError,
    RuntimeFault,
    SandboxViolation,
    StepBudgetExceeded,
    builtin_catalog_text,
    builtin_library,
    parse_program,
    run_predicate,
    run_transition,
)

EMPTY_MODEL = "def transition(state, action):\n    return state\n"


def make_state(**kwargs):
    return canonicalize(kwargs)


# --- parsing and sandbox rejection --------------------------------------------


def test_empty_model_parses():
    program = parse_program(EMPTY_MODEL, "transition")
    assert program.entry_params == ("state", "action")


def test_minimal_predicate_parses():
    program = parse_program(
        "def holds(state, a, b):\n    return get(state, a) == get(state, b)\n",
        "predicate",
        name="samecell",
    )
    assert program.arity == 2


def test_syntax_error_has_location():
    with pytest.raises(DslSyntaxError) as err:
        parse_program("def transition(state, action)\n    return state\n", "transition")
    assert err.value.line >= 1


@pytest.mark.parametrize(
    "source",
    [
        "def transition(state, action):\n    f = open('/etc/passwd')\n    return state\n",
        "import os\n\ndef transition(state, action):\n    return state\n",
        "def transition(state, action):\n    t = time.time()\n    return state\n",
        "def transition(state, action):\n    while True:\n        pass\n    return state\n",
        "def transition(state, action):\n    x = [i for i in state]\n    return state\n",
        "def transition(state, action):\n    x = 1.5\n    return state\n",
        "def transition(state, action):\n    x = state.__class__\n    return state\n",
        "from os import path\n\ndef transition(state, action):\n    return state\n",
        "def transition(state, action):\n    return transition(state, action)\n",
        "def transition(state, action):\n    exec('1')\n    return state\n",
    ],
)
def test_forbidden_constructs_rejected(source):
    with pytest.raises(SandboxViolation):
        parse_program(source, "transition")


def test_entry_function_required():
    with pytest.raises(SandboxViolation):
        parse_program("def helper(state):\n    return state\n", "transition")
    with pytest.raises(SandboxViolation):
        parse_program("def transition(state):\n    return state\n", "transition")


def test_utils_import_accepted():
    program = parse_program(
        "from utils import directions\n\ndef transition(state, action):\n    return state\n",
        "transition",
    )
    assert program.entry == "transition"


# --- evaluation ----------------------------------------------------------------


def test_empty_model_predicts_no_change():
    program = parse_program(EMPTY_MODEL, "transition")
    state = make_state(avatar=[[1, 1]], goal=[[3, 1]])
    assert run_transition(program, state, "up") == state


def test_input_state_never_mutated():
    program = parse_program(
        "def transition(state, action):\n    state['marker'] = [[9, 9]]\n    return state\n",
        "transition",
    )
    state = make_state(avatar=[[1, 1]])
    result = run_transition(program, state, "up")
    assert "marker" in result
    assert "marker" not in state


def test_deterministic_across_runs():
    program = parse_program(read_asset("models", "babyai.wmdsl"), "transition")
    state = make_state(
        red_agent=[[1, 1]],
        agent_direction=[1, 0],
        agent_carrying=[],
        grey_wall=[[0, 0], [3, 3]],
    )
    first = run_transition(program, state, "forward")
    second = run_transition(program, state, "forward")
    assert first == second


def test_maze_model_blocked_by_wall():
    program = parse_program(read_asset("models", "maze.wmdsl"), "transition")
    state = make_state(avatar=[[1, 1]], wall=[[2, 1]], goal=[[2, 2]])
    assert run_transition(program, state, "right") == state
    moved = run_transition(program, state, "down")
    assert moved["avatar"] == ((1, 2),)


def test_babyai_model_unlocks_facing_door_with_key():
    program = parse_program(read_asset("models", "babyai.wmdsl"), "transition")
    state = make_state(
        red_agent=[[1, 1]],
        agent_direction=[1, 0],
        agent_carrying=["blue_key"],
        locked_blue_door=[[2, 1]],
    )
    result = run_transition(program, state, "toggle")
    assert "locked_blue_door" not in result
    assert result["open_blue_door"] == ((2, 1),)


def test_babyai_model_toggle_without_key_is_noop():
    program = parse_program(read_asset("models", "babyai.wmdsl"), "transition")
    state = make_state(
        red_agent=[[1, 1]],
        agent_direction=[1, 0],
        agent_carrying=[],
        locked_blue_door=[[2, 1]],
    )
    assert run_transition(program, state, "toggle") == state


def test_missing_key_bare_index_faults():
    program = parse_program(
        "def transition(state, action):\n    x = state['ghost']\n    return state\n",
        "transition",
    )
    with pytest.raises(RuntimeFault) as err:
        run_transition(program, make_state(avatar=[[0, 0]]), "up")
    assert err.value.kind == "missing_key"


def test_get_with_default_avoids_fault():
    program = parse_program(
        "def transition(state, action):\n"
        "    cake = get(state, 'cake', none)\n"
        "    if cake == none:\n"
        "        return state\n"
        "    return state\n",
        "transition",
    )
    state = make_state(avatar=[[0, 0]])
    assert run_transition(program, state, "up") == state


def test_unbounded_list_growth_hits_step_budget():
    program = parse_program(
        "def transition(state, action):\n"
        "    xs = [1]\n"
        "    for x in xs:\n"
        "        append(xs, x)\n"
        "    return state\n",
        "transition",
    )
    with pytest.raises(StepBudgetExceeded):
        run_transition(program, make_state(), "up", step_budget=5_000)


def test_oversized_allocation_faults():
    program = parse_program(
        "def transition(state, action):\n    x = 'a' * 1000000000\n    return state\n",
        "transition",
    )
    with pytest.raises(RuntimeFault) as err:
        run_transition(program, make_state(), "up")
    assert err.value.kind == "allocation"


def test_mutual_recursion_faults_at_runtime():
    program = parse_program(
        "def a(x):\n    return b(x)\n\n"
        "def b(x):\n    return a(x)\n\n"
        "def transition(state, action):\n    a(1)\n    return state\n",
        "transition",
    )
    with pytest.raises(RuntimeFault) as err:
        run_transition(program, make_state(), "up")
    assert err.value.kind == "recursion"


def test_bad_return_type_faults():
    program = parse_program("def transition(state, action):\n    return 3\n", "transition")
    with pytest.raises(RuntimeFault) as err:
        run_transition(program, make_state(), "up")
    assert err.value.kind == "bad_state"


def test_swap_prefix_rename():
    program = parse_program(
        "def transition(state, action):\n"
        "    new_state = state.copy()\n"
        "    for key in state.keys():\n"
        "        if has_prefix(key, 'locked_'):\n"
        "            new_state[swap_prefix(key, 'locked_', 'open_')] = state[key]\n"
        "            del new_state[key]\n"
        "    return new_state\n",
        "transition",
    )
    state = make_state(locked_blue_door=[[4, 2]])
    result = run_transition(program, state, "toggle")
    assert result == make_state(open_blue_door=[[4, 2]])


def test_fstring_interpolation():
    program = parse_program(
        "def transition(state, action):\n"
        "    color = 'blue'\n"
        "    new_state = state.copy()\n"
        "    new_state[f'open_{color}_door'] = [[1, 1]]\n"
        "    return new_state\n",
        "transition",
    )
    result = run_transition(program, make_state(), "toggle")
    assert result["open_blue_door"] == ((1, 1),)


# --- predicates ----------------------------------------------------------------


def test_ontop_classifier_overlap():
    program = parse_program(read_asset("classifiers", "ontop.wmdsl"), "predicate", name="ontop")
    overlapping = make_state(mug=[[4, 4]], table=[[4, 4]])
    apart = make_state(mug=[[4, 4]], table=[[3, 4]])
    assert run_predicate(program, overlapping, ["mug", "table"]) is True
    assert run_predicate(program, apart, ["mug", "table"]) is False


def test_missing_object_yields_false():
    program = parse_program(read_asset("classifiers", "ontop.wmdsl"), "predicate", name="isleftof")
    state = make_state(book=[[1, 1]])
    assert run_predicate(program, state, ["book", "lamp"]) is False


def test_holding_classifier_reads_inventory():
    program = parse_program(read_asset("classifiers", "holding.wmdsl"), "predicate", name="holding")
    carrying = make_state(red_agent=[[1, 1]], agent_carrying=["red_key"])
    empty = make_state(red_agent=[[1, 1]], agent_carrying=[])
    assert run_predicate(program, carrying, ["red_agent", "red_key"]) is True
    assert run_predicate(program, empty, ["red_agent", "red_key"]) is False


def test_predicate_runtime_fault_is_false():
    program = parse_program(
        "def holds(state, a):\n    return state[a][0][0] == 1\n", "predicate", name="probe"
    )
    assert run_predicate(program, make_state(), ["ghost"]) is False


def test_predicate_arity_enforced():
    program = parse_program(read_asset("classifiers", "holding.wmdsl"), "predicate", name="holding")
    with pytest.raises(ValueError):
        run_predicate(program, make_state(), ["only_one"])


def test_predicate_step_budget_escapes():
    program = parse_program(
        "def holds(state, a):\n"
        "    xs = [1]\n"
        "    for x in xs:\n"
        "        append(xs, x)\n"
        "    return true\n",
        "predicate",
        name="spin",
    )
    with pytest.raises(StepBudgetExceeded):
        run_predicate(program, make_state(), ["a"], step_budget=1_000)


# --- builtin catalog -----------------------------------------------------------


def test_directions_convention():
    assert DIRECTIONS["up"] == [0, -1]
    assert DIRECTIONS["down"] == [0, 1]
    assert DIRECTIONS["left"] == [-1, 0]
    assert DIRECTIONS["right"] == [1, 0]


def test_catalog_contents():
    catalog = builtin_library()
    for name in ("get", "directions", "shift", "swap_prefix", "contains"):
        assert name in catalog
    text = builtin_catalog_text()
    assert text == builtin_catalog_text()
    assert "while loops" in text
