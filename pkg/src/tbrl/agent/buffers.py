"""Replay buffers: exploration rollouts, model predictions, observations.

The predicted/observed pair is index-aligned per executed action, which
makes the model-consistency check a simple positional comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..state import Transition

__all__ = ["Mismatch", "ReplayBuffers"]


@dataclass(frozen=True)
class Mismatch:
    index: int
    predicted: Transition
    observed: Transition


@dataclass
class ReplayBuffers:
    r_random: list[Transition] = field(default_factory=list)
    r_p: list[Transition] = field(default_factory=list)
    r_a: list[Transition] = field(default_factory=list)
    history: list[Transition] = field(default_factory=list)  # every observation ever

    def record_step(self, predicted: Transition, observed: Transition) -> None:
        if predicted.operator_tag != observed.operator_tag:
            raise ValueError("predicted/observed operator tags must agree")
        self.r_p.append(predicted)
        self.r_a.append(observed)
        self.history.append(observed)

    def record_random(self, transitions: list[Transition]) -> None:
        self.r_random.extend(transitions)
        self.history.extend(transitions)

    def mismatches(self) -> list[Mismatch]:
        out = []
        for i, (p, a) in enumerate(zip(self.r_p, self.r_a)):
            if p.after != a.after or p.before != a.before:
                out.append(Mismatch(i, p, a))
        return out

    def aligned(self) -> bool:
        return len(self.r_p) == len(self.r_a)

    def clear_comparison(self) -> None:
        """Fresh prediction/observation window (after a revision or replan)."""
        self.r_p.clear()
        self.r_a.clear()

    def ground_truth(self) -> list[Transition]:
        """Everything an accepted model must reproduce."""
        return list(self.history)
