"""Agent loop: abstraction synthesis, bi-level planning, model revision."""

from .buffers import Mismatch, ReplayBuffers
from .episode import (
    AgentConfig,
    CheckOutcome,
    EpisodeResult,
    execute_and_check,
    explore_random,
    solve_level,
)
from .errors import (
    AgentError,
    ExplorationExhausted,
    NodeBudget,
    RevisionExhausted,
    SubgoalUnreachable,
    SynthesisExhausted,
    UngroundedPredicate,
)
from .library import AbstractionLibrary
from .planning import SubgoalPlan, bfs_subgoal, effects_hold, flat_search
from .synthesis import (
    revise_world_model,
    synthesize_abstractions,
    synthesize_classifiers,
    synthesize_problem,
    synthesize_world_model,
)

__all__ = [
    "AbstractionLibrary",
    "AgentConfig",
    "AgentError",
    "CheckOutcome",
    "EpisodeResult",
    "ExplorationExhausted",
    "Mismatch",
    "NodeBudget",
    "ReplayBuffers",
    "RevisionExhausted",
    "SubgoalPlan",
    "SubgoalUnreachable",
    "SynthesisExhausted",
    "UngroundedPredicate",
    "bfs_subgoal",
    "effects_hold",
    "execute_and_check",
    "explore_random",
    "flat_search",
    "revise_world_model",
    "solve_level",
    "synthesize_abstractions",
    "synthesize_classifiers",
    "synthesize_problem",
    "synthesize_world_model",
]
