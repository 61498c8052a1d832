"""Prompt templates with named placeholders, shipped as text assets."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..assets import read_asset

__all__ = ["MissingPlaceholder", "PromptTemplate", "few_shot_pddl_examples", "load_template"]

_PLACEHOLDER_RE = re.compile(r"\{([a-z_]+)\}")

FEW_SHOT_ASSETS = ("few_shot_1.pddl", "few_shot_2.pddl", "few_shot_3.pddl")


class MissingPlaceholder(KeyError):
    pass


@dataclass(frozen=True)
class PromptTemplate:
    name: str
    body: str

    @property
    def placeholders(self) -> frozenset[str]:
        return frozenset(_PLACEHOLDER_RE.findall(self.body))

    def render(self, **bindings: str) -> str:
        """Exact substitution; every placeholder must be bound."""
        missing = self.placeholders - set(bindings)
        if missing:
            raise MissingPlaceholder(f"{self.name}: unbound {sorted(missing)}")

        def sub(match: re.Match) -> str:
            return str(bindings[match.group(1)])

        return _PLACEHOLDER_RE.sub(sub, self.body)


def load_template(name: str) -> PromptTemplate:
    return PromptTemplate(name, read_asset("prompts", f"{name}.txt"))


def few_shot_pddl_examples() -> str:
    """The three toy abstraction examples, concatenated in order."""
    return "\n".join(read_asset("pddl", name).strip() + "\n" for name in FEW_SHOT_ASSETS)
