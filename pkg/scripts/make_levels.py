#!/usr/bin/env python3
"""Regenerate the level fixture files under levels/.

Levels are authored here as compact ASCII sketches and written out in
the canonical interchange format, so fixture bytes stay deterministic.
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from tbrl.state import canonicalize, serialize  # noqa: E402


def grid_from_sketch(sketch: str, legend: dict[str, str]) -> tuple[dict, tuple[int, int]]:
    rows = [line for line in sketch.strip("\n").splitlines()]
    width = max(len(r) for r in rows)
    state: dict[str, list] = {}
    for y, row in enumerate(rows):
        for x, ch in enumerate(row):
            if ch in (".", " "):
                continue
            key = legend[ch]
            state.setdefault(key, []).append([x, y])
    return state, (width, len(rows))


def write_level(path: Path, family: str, state: dict, grid, win: str = "", **header):
    lines = [f"family: {family}"]
    for key, value in header.items():
        lines.append(f"{key}: {value}")
    if win:
        lines.append(f"win: {win}")
    lines.append(f"grid: [{grid[0]}, {grid[1]}]")
    lines.append("---")
    doc = serialize(canonicalize(state))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n" + doc, encoding="utf-8")
    print(f"wrote {path}")


def main() -> None:
    levels = ROOT / "levels"

    state, grid = grid_from_sketch(
        """
#######
#@....#
###.###
#...G.#
#######
""",
        {"#": "wall", "@": "avatar", "G": "goal"},
    )
    write_level(levels / "labyrinth" / "corridor.lvl", "labyrinth", state, grid)

    state, grid = grid_from_sketch(
        """
#####
#@G.#
#...#
#...#
#####
""",
        {"#": "wall", "@": "avatar", "G": "goal"},
    )
    write_level(levels / "maze" / "open_3x3.lvl", "maze", state, grid)

    state, grid = grid_from_sketch(
        """
#######
#@..#.#
#.#.#.#
#.#...#
#.###.#
#....G#
#######
""",
        {"#": "wall", "@": "avatar", "G": "goal"},
    )
    write_level(levels / "maze" / "maze_5x5.lvl", "maze", state, grid)

    state, grid = grid_from_sketch(
        """
#######
#@..^G#
#.....#
#######
""",
        {"#": "wall", "@": "avatar", "G": "goal", "^": "trap"},
    )
    write_level(levels / "maze" / "trap_maze.lvl", "maze", state, grid)

    state, grid = grid_from_sketch(
        """
#####
#@..#
#.#.#
#.#G#
#####
""",
        {"#": "wall", "@": "avatar", "G": "goal"},
    )
    # goal pocket sealed off: (3,2) is wall, (3,3) goal, neighbours walls
    state["wall"].append([3, 1])
    write_level(levels / "maze" / "walled_goal.lvl", "maze", state, grid)

    state, grid = grid_from_sketch(
        """
#######
#.....#
#.@...#
#..B..#
#.....#
#..O..#
#######
""",
        {"#": "wall", "@": "avatar", "B": "box", "O": "hole"},
    )
    write_level(levels / "sokoban" / "push_7x7.lvl", "sokoban", state, grid)

    state, grid = grid_from_sketch(
        """
#####
#@..#
#...#
#.k.#
#####
""",
        {"#": "grey_wall", "@": "red_agent", "k": "blue_key"},
    )
    state["agent_direction"] = [0, 1]
    state["agent_carrying"] = []
    write_level(
        levels / "babyai" / "pickup_5x5.lvl", "babyai", state, grid, win="carrying blue_key"
    )

    state, grid = grid_from_sketch(
        """
######
#@.#.#
#..L.#
#k.#.#
#..#.#
######
""",
        {"#": "grey_wall", "@": "red_agent", "k": "blue_key", "L": "locked_blue_door"},
    )
    state["agent_direction"] = [0, 1]
    state["agent_carrying"] = []
    write_level(
        levels / "babyai" / "unlock_6x6.lvl", "babyai", state, grid, win="exists open_blue_door"
    )

    write_level(
        levels / "babyai" / "boss.lvl",
        "babyai",
        {},
        (8, 6),
        win="reach red_agent goal",
        generator="boss",
    )

    state, grid = grid_from_sketch(
        """
#####
#@..#
#...#
#..>#
#####
""",
        {"#": "wall", "@": "agent", ">": "downstairs"},
    )
    write_level(levels / "minihack" / "room_5x5.lvl", "minihack", state, grid)

    rows = ["#" * 15]
    for y in range(1, 14):
        rows.append("#" + "." * 13 + "#")
    rows.append("#" * 15)
    sketch = "\n".join(rows)
    state, grid = grid_from_sketch(sketch, {"#": "wall"})
    state["agent"] = [[1, 1]]
    state["downstairs"] = [[13, 13]]
    state["wall"] += [[7, y] for y in range(1, 11)]
    write_level(levels / "minihack" / "room_15x15.lvl", "minihack", state, grid)

    state, grid = grid_from_sketch(
        """
#######
#@....#
#.^^..#
#..^..#
#.....#
#....>#
#######
""",
        {"#": "wall", "@": "agent", ">": "downstairs", "^": "trap"},
    )
    write_level(levels / "minihack" / "traps_7x7.lvl", "minihack", state, grid)

    state, grid = grid_from_sketch(
        """
#######
#@....#
#.....#
#..m..#
#.....#
#....>#
#######
""",
        {"#": "wall", "@": "agent", ">": "downstairs", "m": "monster"},
    )
    write_level(levels / "minihack" / "monster_7x7.lvl", "minihack", state, grid)

    state, grid = grid_from_sketch(
        """
#########
#.......#
#@/....M#
#.......#
#########
""",
        {"#": "wall", "@": "agent", "/": "wand", "M": "minotaur"},
    )
    state["agent_carrying"] = []
    state["zap_sequence"] = []
    write_level(
        levels / "minihack" / "wod_9x5.lvl",
        "minihack",
        state,
        grid,
        variant="wod",
        kill_range=5,
    )


if __name__ == "__main__":
    main()
