import pytest
from hypothesis import given, strategies as st

from tbrl.state import (
    InvalidKey,
    MalformedValue,
    ParseError,
    RawState,
    apply_delta,
    canonicalize,
    deserialize,
    diff,
    serialize,
)


def test_canonicalize_sorts_keys():
    s = canonicalize({"mug": [[4, 4]], "table": [[3, 4]]})
    assert s.keys() == ("mug", "table")
    assert s["mug"] == ((4, 4),)


def test_canonicalize_order_independent():
    a = canonicalize({"mug": [[4, 4]], "table": [[3, 4]]})
    b = canonicalize({"table": [[3, 4]], "mug": [[4, 4]]})
    assert a == b


def test_canonicalize_preserves_all_three_value_kinds():
    s = canonicalize(
        {"red_agent": [[3, 4]], "agent_direction": [0, 1], "agent_carrying": ["red_key"]}
    )
    assert s["red_agent"] == ((3, 4),)
    assert s["agent_direction"] == (0, 1)
    assert s["agent_carrying"] == ("red_key",)


def test_canonicalize_idempotent():
    s = canonicalize({"avatar": [[1, 2]], "wall": [[0, 0], [0, 1]]})
    assert canonicalize(s) is s


def test_canonicalize_sorts_position_lists():
    a = canonicalize({"wall": [[2, 0], [0, 0], [1, 0]]})
    b = canonicalize({"wall": [[0, 0], [1, 0], [2, 0]]})
    assert a == b


def test_invalid_key_rejected():
    with pytest.raises(InvalidKey):
        canonicalize({"Bad-Name": [[0, 0]]})


@pytest.mark.parametrize(
    "value",
    [
        [[1]],
        [[1, 2, 3]],
        [["x", 1]],
        [1, 2, 3],
        "notalist",
        [[1.5, 2.0]],
        [True, False],
    ],
)
def test_malformed_values_rejected(value):
    with pytest.raises((MalformedValue, InvalidKey)):
        canonicalize({"thing": value})


def test_diff_identity_is_empty():
    s = canonicalize({"avatar": [[1, 1]], "goal": [[2, 2]]})
    assert diff(s, s).is_empty()


def test_diff_box_into_hole_reports_removal():
    before = canonicalize({"avatar": [[1, 1]], "box": [[2, 1]], "hole": [[3, 1]]})
    after = canonicalize({"avatar": [[2, 1]], "hole": [[3, 1]]})
    d = diff(before, after)
    assert ("box", ((2, 1),)) in d.removed
    assert ("avatar", ((1, 1),), ((2, 1),)) in d.changed


def test_diff_door_unlock_rename():
    before = canonicalize({"locked_blue_door": [[4, 2]]})
    after = canonicalize({"open_blue_door": [[4, 2]]})
    d = diff(before, after)
    assert d.removed == frozenset({("locked_blue_door", ((4, 2),))})
    assert d.added == frozenset({("open_blue_door", ((4, 2),))})


def test_serialize_empty_state():
    assert serialize(RawState()) == "{}\n"
    assert deserialize("{}") == RawState()


def test_serialize_round_trip_fixture():
    s = canonicalize(
        {"avatar": [[1, 1]], "goal": [[3, 1]], "wall": [[0, 0], [0, 1]], "agent_carrying": ["red_key"]}
    )
    assert deserialize(serialize(s)) == s


def test_deserialize_reports_location():
    with pytest.raises(ParseError) as err:
        deserialize("avatar: [[1, 1]]\ngoal: [[oops]]\n")
    assert err.value.line == 2


def test_deserialize_rejects_duplicates():
    with pytest.raises(ParseError):
        deserialize("avatar: [[1,1]]\navatar: [[2,2]]\n")


names = st.from_regex(r"[a-z][a-z0-9_]{0,8}", fullmatch=True)
coords = st.tuples(st.integers(-20, 20), st.integers(-20, 20))
values = st.one_of(
    st.lists(coords, max_size=5).map(lambda ps: [list(p) for p in ps]),
    coords.map(list),
    st.lists(names, max_size=3).map(list),
)
state_maps = st.dictionaries(names, values, max_size=6)


@given(state_maps)
def test_round_trip_is_identity(raw):
    s = canonicalize(raw)
    assert deserialize(serialize(s)) == s


@given(state_maps)
def test_canonicalize_idempotent_property(raw):
    s = canonicalize(raw)
    assert canonicalize(s.to_dict()) == s


@given(state_maps, state_maps)
def test_diff_apply_inverse(raw_a, raw_b):
    a, b = canonicalize(raw_a), canonicalize(raw_b)
    assert apply_delta(a, diff(a, b)) == b


@given(state_maps)
def test_serialization_is_byte_deterministic(raw):
    s = canonicalize(raw)
    assert serialize(s) == serialize(deserialize(serialize(s)))
