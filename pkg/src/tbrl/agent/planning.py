"""Low-level search through the learned model.

``bfs_subgoal`` finds the shortest primitive-action sequence to a state
where a grounded operator's effects hold according to the predicate
classifiers; ``flat_search`` (the non-hierarchical ablation) searches
straight for the environment win condition.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from ..envs import WinCondition
from ..pddl import GroundedOperator
from ..state import Action, RawState, Transition
from ..wmdsl import PredicateProgram, TransitionProgram, WmdslError, run_predicate, run_transition
from .errors import NodeBudget, SubgoalUnreachable, UngroundedPredicate

__all__ = ["SubgoalPlan", "bfs_subgoal", "effects_hold", "flat_search"]


@dataclass(frozen=True)
class SubgoalPlan:
    actions: tuple[Action, ...]
    predicted: tuple[Transition, ...]


def effects_hold(
    state: RawState,
    operator: GroundedOperator,
    classifiers: dict[str, PredicateProgram],
    step_budget: int = 100_000,
) -> bool:
    """True when every effect literal matches its classifier's verdict."""
    for literal in operator.effect:
        classifier = classifiers.get(literal.predicate)
        if classifier is None:
            raise UngroundedPredicate(f"predicate {literal.predicate!r} has no classifier")
        value = run_predicate(classifier, state, literal.args, step_budget=step_budget)
        if value != literal.positive:
            return False
    return True


def _search(
    start: RawState,
    model: TransitionProgram,
    actions: tuple[Action, ...],
    goal,
    operator_tag: str | None,
    node_budget: int,
    step_budget: int,
) -> SubgoalPlan:
    if goal(start):
        return SubgoalPlan((), ())
    seen = {start}
    queue: deque[tuple[RawState, tuple[Transition, ...]]] = deque([(start, ())])
    expanded = 0
    while queue:
        state, path = queue.popleft()
        expanded += 1
        if expanded > node_budget:
            raise NodeBudget(f"subgoal search expanded more than {node_budget} states")
        for action in actions:
            try:
                succ = run_transition(model, state, action, step_budget=step_budget)
            except WmdslError:
                continue  # defective branch; dead end for the search
            if succ in seen:
                continue
            seen.add(succ)
            step = Transition(state, action, succ, operator_tag)
            if goal(succ):
                full = path + (step,)
                return SubgoalPlan(tuple(t.action for t in full), full)
            queue.append((succ, path + (step,)))
    raise SubgoalUnreachable("no model-predicted state satisfies the subgoal")


def bfs_subgoal(
    start: RawState,
    model: TransitionProgram,
    operator: GroundedOperator,
    classifiers: dict[str, PredicateProgram],
    actions: tuple[Action, ...],
    node_budget: int = 200_000,
    step_budget: int = 100_000,
) -> SubgoalPlan:
    """Shortest predicted action sequence making EFF(operator) hold."""

    def goal(state: RawState) -> bool:
        return effects_hold(state, operator, classifiers, step_budget)

    # Surface missing classifiers before searching.
    goal(start)
    return _search(start, model, actions, goal, operator.label(), node_budget, step_budget)


def flat_search(
    start: RawState,
    model: TransitionProgram,
    win: WinCondition,
    actions: tuple[Action, ...],
    node_budget: int = 200_000,
    step_budget: int = 100_000,
) -> SubgoalPlan:
    """Plan straight for the win condition, no abstractions involved."""
    return _search(start, model, actions, win.holds, "flat", node_budget, step_budget)
