"""Agent-level failure modes; all are captured into episode results."""

from __future__ import annotations

__all__ = [
    "AgentError",
    "ExplorationExhausted",
    "NodeBudget",
    "RevisionExhausted",
    "SubgoalUnreachable",
    "SynthesisExhausted",
    "UngroundedPredicate",
]


class AgentError(Exception):
    pass


class SynthesisExhausted(AgentError):
    """Repair budget spent without a usable synthesis result."""


class RevisionExhausted(AgentError):
    """Revision budget spent without a model that fits the observations."""


class ExplorationExhausted(AgentError):
    """Outer exploration budget spent; the level is marked unsolved."""


class SubgoalUnreachable(AgentError):
    """Breadth-first search exhausted the model-predicted state space."""


class NodeBudget(AgentError):
    """Subgoal search exceeded its node budget."""


class UngroundedPredicate(AgentError):
    """A domain predicate has no classifier; operators using it cannot run."""
