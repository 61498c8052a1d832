"""Shortest-plan search over the grounded STRIPS state space.

Grounded spaces at this scale are tiny, so plain breadth-first search
(uniform cost with unit edges) replaces an external planner.  Ties break
by the deterministic grounded-operator ordering, so identical inputs
always yield identical plans.
"""

from __future__ import annotations

from collections import deque

from .analysis import GroundedOperator, ground
from .syntax import DomainAst, Literal, PddlError, ProblemAst

__all__ = ["HighLevelPlan", "ResourceLimit", "Unsolvable", "goals_satisfied", "plan", "simulate"]

Atom = tuple[str, tuple[str, ...]]
State = frozenset


class Unsolvable(PddlError):
    """Reachable state space exhausted without satisfying the goals."""


class ResourceLimit(PddlError):
    """Node budget exceeded before a plan was found."""


HighLevelPlan = tuple[GroundedOperator, ...]


def goals_satisfied(state: State, goals: tuple[Literal, ...]) -> bool:
    for lit in goals:
        holds = (lit.predicate, lit.args) in state
        if holds != lit.positive:
            return False
    return True


def _applicable(state: State, op: GroundedOperator) -> bool:
    return op.pos_pre() <= state and not (op.neg_pre() & state)


def _apply(state: State, op: GroundedOperator) -> State:
    return (state - op.dels()) | op.adds()


def simulate(init: State, ops: list[GroundedOperator] | HighLevelPlan) -> State:
    """Apply a plan under STRIPS semantics, checking applicability."""
    state = init
    for op in ops:
        if not _applicable(state, op):
            raise PddlError(f"operator {op.label()} not applicable during simulation")
        state = _apply(state, op)
    return state


def plan(
    domain: DomainAst,
    problem: ProblemAst,
    max_nodes: int = 100_000,
    operators: tuple[GroundedOperator, ...] | None = None,
) -> HighLevelPlan:
    """Shortest operator sequence from init to the goals.

    Raises Unsolvable when the reachable space is exhausted and
    ResourceLimit when more than max_nodes states were expanded.  Every
    returned plan is re-simulated before being handed out.
    """
    ops = ground(domain, problem) if operators is None else operators
    init: State = frozenset(problem.init)
    if goals_satisfied(init, problem.goals):
        return ()

    frontier: deque[State] = deque([init])
    parents: dict[State, tuple[State, GroundedOperator] | None] = {init: None}
    expanded = 0
    while frontier:
        state = frontier.popleft()
        expanded += 1
        if expanded > max_nodes:
            raise ResourceLimit(f"expanded more than {max_nodes} states")
        for op in ops:
            if not _applicable(state, op):
                continue
            succ = _apply(state, op)
            if succ in parents:
                continue
            parents[succ] = (state, op)
            if goals_satisfied(succ, problem.goals):
                return _reconstruct(parents, succ, init, problem)
            frontier.append(succ)
    raise Unsolvable("no reachable state satisfies the goals")


def _reconstruct(
    parents: dict,
    goal_state: State,
    init: State,
    problem: ProblemAst,
) -> HighLevelPlan:
    path: list[GroundedOperator] = []
    cur = goal_state
    while parents[cur] is not None:
        prev, op = parents[cur]
        path.append(op)
        cur = prev
    path.reverse()
    final = simulate(init, path)
    if not goals_satisfied(final, problem.goals):  # pragma: no cover - soundness guard
        raise PddlError("internal error: emitted plan does not satisfy the goals")
    return tuple(path)
