"""ASCII dump of a raw state, for debugging only."""

from __future__ import annotations

from ..state import RawState
from .spec import EnvironmentSpec

__all__ = ["render_ascii"]

_GLYPHS = [
    ("wall", "#"),
    ("grey_wall", "#"),
    ("trap", "^"),
    ("hole", "O"),
    ("box", "B"),
    ("goal", "G"),
    ("downstairs", ">"),
    ("monster", "m"),
    ("minotaur", "M"),
    ("wand", "/"),
]


def render_ascii(spec: EnvironmentSpec, state: RawState) -> str:
    cells: dict[tuple[int, int], str] = {}
    for key, glyph in _GLYPHS:
        for pos in state.get(key) or ():
            cells[pos] = glyph
    for key, value in state.items():
        if key.endswith("_key"):
            for pos in value:
                cells[pos] = "k"
        elif "_door" in key:
            glyph = {"locked": "L", "closed": "D", "open": "-"}.get(key.split("_")[0], "D")
            for pos in value:
                cells[pos] = glyph
    avatar = state.get(spec.avatar_key) or ()
    for pos in avatar:
        cells[pos] = "@"

    if spec.grid:
        w, h = spec.grid
    else:
        xs = [p[0] for p in cells] or [0]
        ys = [p[1] for p in cells] or [0]
        w, h = max(xs) + 1, max(ys) + 1
    rows = ["".join(cells.get((x, y), ".") for x in range(w)) for y in range(h)]
    return "\n".join(rows)
