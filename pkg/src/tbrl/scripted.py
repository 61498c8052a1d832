"""Rule-based offline synthesizer.

A transport that answers synthesis prompts deterministically from the
bundled reference programs and PDDL files, so the whole agent can run,
be demonstrated, and record cassettes without any network service.  Its
first world model for a family is the "natural first guess" (traps
ignored, boxes never vanish); revision requests get the corrected
program, exercising the same repair loop a live model would.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .assets import read_asset
from .llm import TokenUsage, TransportResult
from .llm.client import CompletionRequest
from .pddl import parse_document, pretty_domain

__all__ = ["ScriptedError", "ScriptedSynthesizer"]


class ScriptedError(Exception):
    """The scripted synthesizer has no rule for this prompt."""


_PURPOSE_MARKERS = [
    ("abstraction", "minimal PDDL domain and problem file"),
    ("problem", "PDDL problem file for this given PDDL domain file"),
    ("classifier", "must write predicate classifiers"),
    ("world_model", "come up with a transition model"),
    ("revision", "made incorrect predictions"),
]

_FAMILY_MARKERS = [
    ("sokoban", "push the boxes into the holes"),
    ("babyai", "facing a key, it can pick it up"),
    ("minihack_wod", "Kill the minotaur"),
    ("minihack", "move the agent to the downstair"),
    ("maze", "control the avatar and need to reach the goal"),
]

_WORLD_MODELS = {
    "maze": "maze.wmdsl",
    "sokoban": "sokoban_naive.wmdsl",
    "babyai": "babyai.wmdsl",
    "minihack": "minihack_nav.wmdsl",
    "minihack_wod": "minihack_wod.wmdsl",
}

_REVISED_MODELS = {
    "maze": "maze.wmdsl",
    "sokoban": "sokoban.wmdsl",
    "babyai": "babyai.wmdsl",
    "minihack": "minihack_nav.wmdsl",
    "minihack_wod": "minihack_wod.wmdsl",
}

_CLASSIFIER_ASSETS = ("ontop", "holding", "unlocked", "dead")


@dataclass
class ScriptedSynthesizer:
    """Callable transport: CompletionRequest -> TransportResult."""

    # Optional hook consulted first: (purpose, family, prompt) -> str | None.
    override: Callable[[str, str, str], str | None] | None = None
    calls: list[tuple[str, str]] = field(default_factory=list)

    def __call__(self, request: CompletionRequest) -> TransportResult:
        prompt = request.messages[-1][1]
        purpose = _detect(prompt, _PURPOSE_MARKERS, "purpose")
        family = _detect(prompt, _FAMILY_MARKERS, "family")
        self.calls.append((purpose, family))
        text = self.override(purpose, family, prompt) if self.override else None
        if text is None:
            text = self.respond(purpose, family, prompt)
        usage = TokenUsage(len(prompt) // 4, len(text) // 4)
        return TransportResult(text=text, usage=usage, latency_ms=0)

    # -- purpose handlers -----------------------------------------------------

    def respond(self, purpose: str, family: str, prompt: str) -> str:
        if purpose == "abstraction":
            return self._abstractions(family, prompt)
        if purpose == "problem":
            return self._problem(family, prompt)
        if purpose == "classifier":
            return self._classifiers(prompt)
        if purpose == "world_model":
            return self._world_model(family, prompt)
        return self._revision(family)

    def _abstractions(self, family: str, prompt: str) -> str:
        state_keys = _state_keys(prompt)
        if family in ("maze", "sokoban", "minihack"):
            domain = read_asset("pddl", "movement_domain.pddl")
            problem = _movement_problem(family, state_keys)
        elif family == "babyai":
            domain = read_asset("pddl", "babyai_full_domain.pddl")
            problem = _babyai_problem(state_keys)
        elif family == "minihack_wod":
            domain = read_asset("pddl", "combat_domain.pddl")
            problem = (
                "(define (problem kill-minotaur)\n  (:domain combat)\n"
                "  (:objects\n    agent minotaur - object\n  )\n"
                "  (:init\n    (not (dead minotaur))\n  )\n"
                "  (:goal (dead minotaur))\n)\n"
            )
        else:  # pragma: no cover - families are exhaustive
            raise ScriptedError(f"no abstraction rule for family {family}")
        return (
            "Here is a minimal abstraction for this game.\n\n"
            f"```pddl\n{domain.strip()}\n```\n\n```pddl\n{problem.strip()}\n```\n"
        )

    def _problem(self, family: str, prompt: str) -> str:
        domains, _ = parse_document(prompt)
        if not domains:
            raise ScriptedError("transfer prompt carries no domain file")
        domain = domains[-1]  # few-shot toy domains come first
        state_keys = _state_keys(prompt)
        if family in ("maze", "sokoban", "minihack"):
            problem = _movement_problem(family, state_keys, domain.name)
        elif family == "babyai":
            problem = _babyai_problem(state_keys, domain.name)
        elif family == "minihack_wod":
            problem = (
                f"(define (problem kill-minotaur)\n  (:domain {domain.name})\n"
                "  (:objects\n    agent minotaur - object\n  )\n"
                "  (:init)\n  (:goal (dead minotaur))\n)\n"
            )
        else:  # pragma: no cover
            raise ScriptedError(f"no problem rule for family {family}")
        return f"```pddl\n{problem.strip()}\n```\n"

    def _classifiers(self, prompt: str) -> str:
        domains, _ = parse_document(prompt)
        if not domains:
            raise ScriptedError("classifier prompt carries no domain file")
        blocks = []
        for decl in domains[-1].predicates:
            if decl.name not in _CLASSIFIER_ASSETS:
                raise ScriptedError(f"no canned classifier for predicate {decl.name!r}")
            source = read_asset("classifiers", f"{decl.name}.wmdsl").strip()
            blocks.append(f"```wmdsl\n# predicate: {decl.name}\n{source}\n```")
        return "\n\n".join(blocks) + "\n"

    def _world_model(self, family: str, prompt: str) -> str:
        asset = _WORLD_MODELS[family]
        if family == "maze" and "trap:" in prompt:
            # natural first guess: traps look like ordinary floor
            asset = "maze_naive.wmdsl"
        return f"```wmdsl\n{read_asset('models', asset).strip()}\n```\n"

    def _revision(self, family: str) -> str:
        source = read_asset("models", _REVISED_MODELS[family]).strip()
        return f"Corrected model:\n\n```wmdsl\n{source}\n```\n"


def _detect(prompt: str, markers: list[tuple[str, str]], what: str) -> str:
    for name, marker in markers:
        if marker in prompt:
            return name
    raise ScriptedError(f"cannot detect {what} from prompt")


def _state_keys(prompt: str) -> list[str]:
    """Object names from the last raw-state section of the prompt."""
    keys: list[str] = []
    for line in prompt.splitlines():
        if ":" in line and not line.startswith(" "):
            key = line.split(":", 1)[0].strip()
            if key and all(c.islower() or c.isdigit() or c == "_" for c in key):
                keys.append(key)
    return keys


def _movement_problem(family: str, state_keys: list[str], domain_name: str = "movement") -> str:
    if family == "sokoban":
        objects, goal = "avatar box hole", "(ontop box hole)"
    elif family == "minihack":
        objects, goal = "agent downstairs", "(ontop agent downstairs)"
    else:
        objects, goal = "avatar goal", "(ontop avatar goal)"
    return (
        f"(define (problem {family}-task)\n  (:domain {domain_name})\n"
        f"  (:objects\n    {objects} - object\n  )\n"
        f"  (:init\n    ;; nothing overlaps at the start\n    (not {goal})\n  )\n"
        f"  (:goal {goal})\n)\n"
    )


def _babyai_problem(state_keys: list[str], domain_name: str = "babyai") -> str:
    doors = [k for k in state_keys if k.startswith(("locked_", "closed_")) and k.endswith("_door")]
    keys = [k for k in state_keys if k.endswith("_key")]
    has_goal = "goal" in state_keys
    objects = ["red_agent - agent"]
    goals = []
    if keys:
        objects.append(f"{keys[0]} - key")
    if doors:
        door = doors[0].split("_", 1)[1]  # strip the configuration prefix
        objects.append(f"{door} - door")
        goals.append(f"(unlocked {door})")
    if has_goal and doors:
        objects.append("goal - object")
        goals.append("(ontop red_agent goal)")
    if not goals:
        if not keys:
            raise ScriptedError("babyai state offers nothing to pick up or unlock")
        goals.append(f"(holding red_agent {keys[0]})")
    goal_text = goals[0] if len(goals) == 1 else "(and " + " ".join(goals) + ")"
    objects_text = "\n    ".join(objects)
    return (
        f"(define (problem babyai-task)\n  (:domain {domain_name})\n"
        f"  (:objects\n    {objects_text}\n  )\n"
        f"  (:init)\n  (:goal {goal_text})\n)\n"
    )
