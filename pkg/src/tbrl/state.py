"""Canonical object-oriented game states and transitions.

A state maps object names to one of three value kinds: a list of grid
positions, a scalar integer pair (e.g. a facing direction), or a list of
object names (e.g. an inventory).  States are immutable and kept in a
canonical form (sorted keys, sorted position lists) so that equality is
structural and serialization is byte-deterministic.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Union

__all__ = [
    "Action",
    "InvalidKey",
    "MalformedValue",
    "ParseError",
    "RawState",
    "StateDelta",
    "StateError",
    "Transition",
    "Value",
    "apply_delta",
    "canonicalize",
    "deserialize",
    "diff",
    "serialize",
]

# A primitive action is just its name; environments validate membership
# in their action space.
Action = str

Pair = tuple[int, int]
Positions = tuple[Pair, ...]
Names = tuple[str, ...]
# () is the empty collection, valid as either positions or names.
Value = Union[Positions, Pair, Names]

_KEY_RE = re.compile(r"[a-z0-9_]+\Z")


class StateError(Exception):
    """Base class for state construction and parsing errors."""


class InvalidKey(StateError):
    """Object name contains characters outside [a-z0-9_]."""


class MalformedValue(StateError):
    """Value is not a position list, integer pair, or name list."""


class ParseError(StateError):
    """Interchange document failed to parse."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


def _is_int(x: object) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _coerce_value(key: str, value: object) -> Value:
    """Normalize a loosely-typed value into one of the three value kinds."""
    if not isinstance(value, (list, tuple)):
        raise MalformedValue(f"{key}: value must be a list, got {type(value).__name__}")
    items = list(value)
    if not items:
        return ()
    if all(_is_int(x) for x in items):
        if len(items) != 2:
            raise MalformedValue(f"{key}: integer pair must have exactly 2 components")
        return (items[0], items[1])
    if all(isinstance(x, str) for x in items):
        return tuple(items)
    if all(isinstance(x, (list, tuple)) for x in items):
        coords = []
        for pos in items:
            pos = list(pos)
            if len(pos) != 2 or not all(_is_int(c) for c in pos):
                raise MalformedValue(f"{key}: coordinate pair must be 2 integers, got {pos!r}")
            coords.append((pos[0], pos[1]))
        # Position lists have set semantics; a sorted order is the canonical one.
        return tuple(sorted(coords))
    raise MalformedValue(f"{key}: mixed or unsupported value {value!r}")


def is_positions(value: Value) -> bool:
    return isinstance(value, tuple) and all(isinstance(x, tuple) for x in value)


def is_pair(value: Value) -> bool:
    return isinstance(value, tuple) and len(value) == 2 and all(_is_int(x) for x in value)


@dataclass(frozen=True)
class RawState:
    """Immutable canonical state: sorted (name, value) entries."""

    entries: tuple[tuple[str, Value], ...] = ()

    def __post_init__(self) -> None:
        keys = [k for k, _ in self.entries]
        if keys != sorted(keys):
            raise StateError("entries must be key-sorted; use canonicalize()")
        if len(set(keys)) != len(keys):
            raise StateError("duplicate keys in state")

    def keys(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self.entries)

    def items(self) -> tuple[tuple[str, Value], ...]:
        return self.entries

    def get(self, key: str, default: Value | None = None) -> Value | None:
        for k, v in self.entries:
            if k == key:
                return v
        return default

    def __contains__(self, key: str) -> bool:
        return any(k == key for k, _ in self.entries)

    def __getitem__(self, key: str) -> Value:
        value = self.get(key)
        if value is None and key not in self:
            raise KeyError(key)
        return value  # type: ignore[return-value]

    def __iter__(self) -> Iterator[str]:
        return iter(self.keys())

    def __len__(self) -> int:
        return len(self.entries)

    def to_dict(self) -> dict[str, list]:
        """JSON-style mutable copy (positions as [[x, y], ...])."""
        out: dict[str, list] = {}
        for key, value in self.entries:
            if is_positions(value):
                out[key] = [list(p) for p in value]
            else:
                out[key] = list(value)
        return out

    def replace(self, **changes: object) -> "RawState":
        """New state with the given keys set (None removes a key)."""
        raw = self.to_dict()
        for key, value in changes.items():
            if value is None:
                raw.pop(key, None)
            else:
                raw[key] = value  # type: ignore[assignment]
        return canonicalize(raw)


def canonicalize(raw: Mapping[str, object] | RawState) -> RawState:
    """Validate and sort a loosely-ordered state map into canonical form.

    Idempotent: canonical states pass through unchanged.
    """
    if isinstance(raw, RawState):
        return raw
    entries = []
    for key in sorted(raw.keys()):
        if not isinstance(key, str) or not _KEY_RE.match(key):
            raise InvalidKey(f"bad object name {key!r}")
        entries.append((key, _coerce_value(key, raw[key])))
    return RawState(tuple(entries))


@dataclass(frozen=True)
class StateDelta:
    """Minimal difference between two canonical states."""

    added: frozenset[tuple[str, Value]] = frozenset()
    removed: frozenset[tuple[str, Value]] = frozenset()
    changed: frozenset[tuple[str, Value, Value]] = frozenset()

    def is_empty(self) -> bool:
        return not (self.added or self.removed or self.changed)

    def describe(self) -> str:
        """Compact human/LLM-readable rendering, deterministic order."""
        parts = []
        for key, value in sorted(self.removed):
            parts.append(f"removed {key}: {_dump_value(value)}")
        for key, value in sorted(self.added):
            parts.append(f"added {key}: {_dump_value(value)}")
        for key, old, new in sorted(self.changed):
            parts.append(f"changed {key}: {_dump_value(old)} -> {_dump_value(new)}")
        return "; ".join(parts) if parts else "no change"


def diff(before: RawState, after: RawState) -> StateDelta:
    """Delta such that apply_delta(before, delta) == after."""
    added = set()
    removed = set()
    changed = set()
    before_map = dict(before.entries)
    after_map = dict(after.entries)
    for key, value in before_map.items():
        if key not in after_map:
            removed.add((key, value))
        elif after_map[key] != value:
            changed.add((key, value, after_map[key]))
    for key, value in after_map.items():
        if key not in before_map:
            added.add((key, value))
    return StateDelta(frozenset(added), frozenset(removed), frozenset(changed))


def apply_delta(before: RawState, delta: StateDelta) -> RawState:
    raw = dict(before.entries)
    for key, value in delta.removed:
        if raw.get(key) != value:
            raise StateError(f"delta removal of {key} does not match state")
        del raw[key]
    for key, old, new in delta.changed:
        if raw.get(key) != old:
            raise StateError(f"delta change of {key} does not match state")
        raw[key] = new
    for key, value in delta.added:
        if key in raw:
            raise StateError(f"delta addition of existing key {key}")
        raw[key] = value
    return RawState(tuple(sorted(raw.items())))


@dataclass(frozen=True)
class Transition:
    """One observed or predicted environment step."""

    before: RawState
    action: Action
    after: RawState
    operator_tag: str | None = field(default=None)

    def delta(self) -> StateDelta:
        return diff(self.before, self.after)


def _dump_value(value: Value) -> str:
    if is_positions(value):
        payload: object = [list(p) for p in value]
    else:
        payload = list(value)
    return json.dumps(payload, separators=(",", ":"))


def serialize(state: RawState) -> str:
    """Line-oriented interchange document; byte-deterministic.

    One ``key: value`` line per entry in sorted-key order; the empty state
    is the single line ``{}``.
    """
    if not state.entries:
        return "{}\n"
    lines = [f"{key}: {_dump_value(value)}" for key, value in state.entries]
    return "\n".join(lines) + "\n"


def deserialize(text: str) -> RawState:
    """Inverse of serialize; raises ParseError with line/column on bad input."""
    stripped = text.strip()
    if stripped == "{}":
        return RawState()
    raw: dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", lineno, 1)
        key, _, rest = line.partition(":")
        key = key.strip()
        if not _KEY_RE.match(key):
            raise ParseError(f"bad object name {key!r}", lineno, 1)
        if key in raw:
            raise ParseError(f"duplicate key {key!r}", lineno, 1)
        try:
            value = json.loads(rest)
        except json.JSONDecodeError as exc:
            col = line.index(":") + 1 + exc.colno
            raise ParseError(f"bad value: {exc.msg}", lineno, col) from None
        if not isinstance(value, list):
            raise ParseError("value must be a JSON array", lineno, line.index(":") + 2)
        try:
            raw[key] = value
        except MalformedValue as exc:  # pragma: no cover - coerced below
            raise ParseError(str(exc), lineno, 1) from None
    try:
        return canonicalize(raw)
    except StateError as exc:
        raise ParseError(str(exc), 1, 1) from None
