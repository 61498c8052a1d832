"""Brute-force search over the true dynamics, used as a test oracle."""

from __future__ import annotations

from collections import deque

from ..state import Action, RawState
from .core import EnvState, reset, step
from .spec import EnvError, EnvironmentSpec

__all__ = ["OracleBudget", "OracleUnsolvable", "enumerate_reachable", "oracle_solve"]


class OracleUnsolvable(EnvError):
    pass


class OracleBudget(EnvError):
    pass


def oracle_solve(
    spec: EnvironmentSpec, seed: int = 0, max_nodes: int = 200_000
) -> list[Action]:
    """Shortest winning action sequence via exhaustive breadth-first search."""
    start = reset(spec, seed)
    if start.won:
        return []
    seen = {start.state}
    queue: deque[tuple[EnvState, list[Action]]] = deque([(start, [])])
    expanded = 0
    while queue:
        env_state, path = queue.popleft()
        expanded += 1
        if expanded > max_nodes:
            raise OracleBudget(f"expanded more than {max_nodes} states")
        for action in spec.actions:
            succ = step(spec, env_state, action)
            if succ.won:
                return path + [action]
            if succ.lost or succ.state in seen:
                continue
            seen.add(succ.state)
            queue.append((succ, path + [action]))
    raise OracleUnsolvable("no action sequence wins this level")


def enumerate_reachable(
    spec: EnvironmentSpec, seed: int = 0, max_states: int = 100_000
) -> list[RawState]:
    """Every distinct raw state reachable from reset, terminal ones included.

    Deterministic order (breadth-first, actions in declared order).
    """
    start = reset(spec, seed)
    seen = {start.state}
    order = [start.state]
    queue: deque[EnvState] = deque([] if start.terminated else [start])
    while queue:
        env_state = queue.popleft()
        for action in spec.actions:
            succ = step(spec, env_state, action)
            if succ.state in seen:
                continue
            if len(seen) >= max_states:
                raise OracleBudget(f"more than {max_states} reachable states")
            seen.add(succ.state)
            order.append(succ.state)
            if not succ.terminated:
                queue.append(succ)
    return order
