"""The end-to-end control loop for one level.

One pass: synthesize or transfer abstractions, explore, learn the world
model and classifiers, plan at the operator level, search each subgoal
through the model, execute in the real environment with a checker, and
on failure either revise the model (predictions diverged) or explore and
re-synthesize the problem (model consistent, abstractions wrong).
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field

from ..envs import Environment, EnvironmentSpec
from ..llm import ChatClient, UsageSummary, usage_total
from ..pddl import (
    GroundedOperator,
    PddlError,
    ProblemAst,
    ResourceLimit,
    Unsolvable,
    ground,
    plan as pddl_plan,
)
from ..state import Action, Transition
from ..wmdsl import TransitionProgram
from .buffers import ReplayBuffers
from .errors import (
    AgentError,
    NodeBudget,
    SubgoalUnreachable,
    SynthesisExhausted,
    UngroundedPredicate,
)
from .library import AbstractionLibrary
from .planning import SubgoalPlan, bfs_subgoal, effects_hold, flat_search
from .synthesis import (
    check_model_against,
    revise_world_model,
    synthesize_abstractions,
    synthesize_classifiers,
    synthesize_problem,
    synthesize_world_model,
)

__all__ = ["AgentConfig", "CheckOutcome", "EpisodeResult", "explore_random", "execute_and_check", "solve_level"]

logger = logging.getLogger(__name__)

MODES = ("full", "no-curriculum", "flat")


@dataclass(frozen=True)
class AgentConfig:
    mode: str = "full"
    repair_budget: int = 3
    revision_budget: int = 5
    exploration_budget: int = 3
    random_actions: int = 10
    bfs_node_budget: int = 200_000
    plan_node_budget: int = 100_000
    step_budget: int = 100_000
    untried_operator_probes: int = 2

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass
class EpisodeResult:
    level: str
    solved: bool = False
    plan: tuple[Action, ...] = ()
    usage: UsageSummary = field(default_factory=UsageSummary)
    wall_time_ms: int = 0
    network_ms: int = 0
    revisions: int = 0
    explorations: int = 0
    first_plan_success: bool = False
    grounding_defects: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class CheckOutcome:
    executed: tuple[Action, ...]
    eff_holds: bool
    won: bool
    lost: bool

    @property
    def passed(self) -> bool:
        return self.eff_holds and not self.lost


def explore_random(env: Environment, n: int, rng: random.Random) -> list[Transition]:
    """n seeded random transitions; the environment is reset afterwards
    (and whenever a rollout terminates mid-way)."""
    if n < 1:
        raise ValueError("exploration needs n >= 1")
    transitions = []
    actions = env.actions()
    for _ in range(n):
        if env.current.terminated:
            env.reset()
        action = rng.choice(actions)
        before = env.state
        after = env.step(action)
        transitions.append(Transition(before, action, after.state))
    env.reset()
    return transitions


def execute_and_check(
    env: Environment,
    subgoal: SubgoalPlan,
    operator: GroundedOperator,
    classifiers,
    buffers: ReplayBuffers,
    step_budget: int = 100_000,
) -> CheckOutcome:
    """Run a subgoal plan in the real environment, recording the aligned
    predicted/observed transition pairs, then check the operator effects
    against the real state."""
    executed: list[Action] = []
    for predicted in subgoal.predicted:
        if env.current.terminated:
            break
        before = env.state
        after = env.step(predicted.action)
        executed.append(predicted.action)
        buffers.record_step(predicted, Transition(before, predicted.action, after.state, operator.label()))
        if env.current.terminated:
            break
    lost = env.current.lost
    try:
        eff = not lost and effects_hold(env.state, operator, classifiers, step_budget)
    except UngroundedPredicate:
        eff = False
    return CheckOutcome(tuple(executed), eff, env.current.won, lost)


def _usage_since(client: ChatClient, mark: int) -> UsageSummary:
    return usage_total(client.log[mark:])


def _network_since(client: ChatClient, mark: int) -> int:
    return sum(e.latency_ms for e in client.log[mark:])


def solve_level(
    spec: EnvironmentSpec,
    seed: int,
    library: AbstractionLibrary,
    client: ChatClient,
    config: AgentConfig | None = None,
) -> EpisodeResult:
    """Solve one level end to end; agent-level failures land in the
    result, never as exceptions."""
    config = config or AgentConfig()
    result = EpisodeResult(level=spec.name)
    started = time.monotonic()
    mark = len(client.log)
    if config.mode == "no-curriculum":
        library = AbstractionLibrary()  # blank abstractions every episode
    try:
        _solve(spec, seed, library, client, config, result)
    except AgentError as exc:
        result.notes.append(f"{type(exc).__name__}: {exc}")
        logger.info("level %s unsolved: %s", spec.name, exc)
    result.usage = _usage_since(client, mark)
    result.network_ms = _network_since(client, mark)
    result.wall_time_ms = int((time.monotonic() - started) * 1000)
    return result


def _ensure_world_model(spec, s0, buffers, library, client, config, result) -> TransitionProgram:
    model = library.world_models.get(spec.mechanics)
    if model is not None:
        problem = check_model_against(model, buffers.ground_truth(), config.step_budget)
        if problem is None:
            return model
        result.notes.append(f"transferred model rejected: {problem}")
    model = synthesize_world_model(
        spec, s0, buffers.r_random, client, config.repair_budget, config.step_budget
    )
    library.world_models[spec.mechanics] = model
    library.note(spec.name, f"world model {spec.mechanics}")
    return model


def _solve(spec, seed, library, client, config, result) -> None:
    env = Environment(spec, seed)
    s0 = env.reset().state
    rng = random.Random(seed)
    buffers = ReplayBuffers()

    buffers.record_random(explore_random(env, config.random_actions, rng))
    model = _ensure_world_model(spec, s0, buffers, library, client, config, result)

    if config.mode == "flat":
        _solve_flat(spec, env, model, library, buffers, client, config, result)
        return

    domain, problem = synthesize_abstractions(spec, s0, library, client, config.repair_budget)
    library.merge_domain(domain, spec.name)
    domain = library.domain
    synthesis = synthesize_classifiers(
        spec,
        s0,
        domain,
        problem,
        model.source,
        client,
        library.classifiers,
        config.repair_budget,
    )
    library.classifiers.update(synthesis.classifiers)
    library.ungrounded |= synthesis.ungrounded
    for name in sorted(synthesis.classifiers):
        library.note(spec.name, f"classifier {name}")

    attempted: set[str] = set()
    passes = 0
    while True:
        passes += 1
        env.reset()
        buffers.clear_comparison()
        pi: list[Action] = []
        failure = None  # None | "mismatch" | "consistent"
        try:
            high_level = pddl_plan(domain, problem, max_nodes=config.plan_node_budget)
        except (Unsolvable, ResourceLimit, PddlError) as exc:
            result.notes.append(f"high-level planning failed: {exc}")
            high_level = None
            failure = "consistent"

        if high_level is not None:
            solved = _execute_plan(
                spec, env, high_level, model, library, buffers, config, result, pi, attempted
            )
            if solved:
                result.solved = True
                result.plan = tuple(pi)
                result.first_plan_success = passes == 1
                return
            failure = "mismatch" if buffers.mismatches() else "consistent"

        model, domain, problem = _recover(
            spec, env, s0, model, domain, problem, library, buffers, client, config, result, failure, rng
        )


def _execute_plan(
    spec, env, high_level, model, library, buffers, config, result, pi, attempted
) -> bool:
    """Execute a high-level plan operator by operator; True on a win."""
    if not high_level:
        # Empty plan: goals already hold per the classifiers; trust the
        # environment flag only.
        return env.current.won
    for k, operator in enumerate(high_level):
        attempted.add(operator.label())
        try:
            subgoal = bfs_subgoal(
                env.state,
                model,
                operator,
                library.classifiers,
                spec.actions,
                config.bfs_node_budget,
                config.step_budget,
            )
        except (SubgoalUnreachable, NodeBudget, UngroundedPredicate) as exc:
            result.notes.append(f"subgoal {operator.label()}: {type(exc).__name__}: {exc}")
            return False
        outcome = execute_and_check(
            env, subgoal, operator, library.classifiers, buffers, config.step_budget
        )
        pi.extend(outcome.executed)
        if outcome.won:
            if not outcome.eff_holds:
                defect = f"{operator.label()}: level won but operator effects unsatisfied"
                result.grounding_defects.append(defect)
                logger.warning("grounding defect: %s", defect)
            return True
        if not outcome.passed:
            return False
        if k == len(high_level) - 1 and outcome.eff_holds and not env.current.won:
            # All effects hold in the real state yet the level is not won:
            # the goal encoding is off; report and fall through to recovery.
            defect = f"{operator.label()}: final effects hold but the level is not won"
            result.grounding_defects.append(defect)
            logger.warning("grounding defect: %s", defect)
    return env.current.won


def _recover(
    spec, env, s0, model, domain, problem, library, buffers, client, config, result, failure, rng
):
    """Model revision when predictions diverged; otherwise exploration
    plus problem re-synthesis (the abstractions, not the model, are wrong)."""
    from .errors import ExplorationExhausted, RevisionExhausted

    if failure == "mismatch":
        if result.revisions >= config.revision_budget:
            raise RevisionExhausted(f"already revised {result.revisions} times")
        model = revise_world_model(
            spec,
            model,
            buffers.mismatches(),
            buffers.ground_truth(),
            client,
            config.repair_budget,
            config.step_budget,
        )
        result.revisions += 1
        library.world_models[spec.mechanics] = model
        library.note(spec.name, f"world model revision {result.revisions}")
        return model, domain, problem

    if result.explorations >= config.exploration_budget:
        raise ExplorationExhausted(f"already explored {result.explorations} times")
    result.explorations += 1
    buffers.record_random(explore_fallback(spec, env, domain, problem, model, library, config, rng))
    if config.mode != "flat":
        problem = synthesize_problem(spec, s0, domain, client, config.repair_budget)
    return model, domain, problem


def explore_fallback(
    spec, env, domain, problem, model, library, config, rng
) -> list[Transition]:
    """Seeded random batch plus a few untried grounded-operator probes."""
    transitions = explore_random(env, config.random_actions, rng)
    if domain is None or problem is None:
        return transitions
    probes = 0
    for operator in ground(domain, problem):
        if probes >= config.untried_operator_probes:
            break
        if not all(l.predicate in library.classifiers for l in operator.effect):
            continue
        try:
            subgoal = bfs_subgoal(
                env.state,
                model,
                operator,
                library.classifiers,
                spec.actions,
                config.bfs_node_budget,
                config.step_budget,
            )
        except AgentError:
            continue
        probes += 1
        for predicted in subgoal.predicted:
            if env.current.terminated:
                break
            before = env.state
            after = env.step(predicted.action)
            transitions.append(Transition(before, predicted.action, after.state))
    env.reset()
    return transitions


def _solve_flat(spec, env, model, library, buffers, client, config, result) -> None:
    """WorldCoder-style ablation: no abstractions, plan straight for the
    win condition through the learned model."""
    passes = 0
    while True:
        passes += 1
        env.reset()
        buffers.clear_comparison()
        try:
            subgoal = flat_search(
                env.state,
                model,
                spec.win,
                spec.actions,
                config.bfs_node_budget,
                config.step_budget,
            )
        except (SubgoalUnreachable, NodeBudget) as exc:
            raise SynthesisExhausted(f"flat search failed: {exc}") from exc
        executed: list[Action] = []
        for predicted in subgoal.predicted:
            if env.current.terminated:
                break
            before = env.state
            after = env.step(predicted.action)
            executed.append(predicted.action)
            buffers.record_step(
                predicted, Transition(before, predicted.action, after.state, "flat")
            )
        if env.current.won:
            result.solved = True
            result.plan = tuple(executed)
            result.first_plan_success = passes == 1
            return
        failure = "mismatch" if buffers.mismatches() else "consistent"
        model, _, _ = _recover(
            spec, env, env.reset().state, model, None, None, library, buffers, client, config,
            result, failure, random.Random(passes),
        )
