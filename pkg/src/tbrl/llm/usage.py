"""Exact token accounting over completion exchanges."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

__all__ = ["TokenUsage", "UsageSummary", "usage_total"]


@dataclass(frozen=True)
class TokenUsage:
    prompt_tokens: int = 0
    completion_tokens: int = 0

    def __post_init__(self) -> None:
        if self.prompt_tokens < 0 or self.completion_tokens < 0:
            raise ValueError("token counts must be non-negative")

    @property
    def total(self) -> int:
        return self.prompt_tokens + self.completion_tokens

    def __add__(self, other: "TokenUsage") -> "TokenUsage":
        return TokenUsage(
            self.prompt_tokens + other.prompt_tokens,
            self.completion_tokens + other.completion_tokens,
        )


@dataclass
class UsageSummary:
    total: TokenUsage = field(default_factory=TokenUsage)
    by_purpose: dict[str, TokenUsage] = field(default_factory=dict)
    by_level: dict[str, TokenUsage] = field(default_factory=dict)
    by_level_and_purpose: dict[tuple[str, str], TokenUsage] = field(default_factory=dict)

    def purpose_total(self, purpose: str, level: str | None = None) -> int:
        if level is None:
            return self.by_purpose.get(purpose, TokenUsage()).total
        return self.by_level_and_purpose.get((level, purpose), TokenUsage()).total


def usage_total(exchanges: Iterable) -> UsageSummary:
    """Sum per-exchange usage, never estimated, grouped by tags."""
    summary = UsageSummary()
    for exchange in exchanges:
        usage = exchange.usage
        summary.total += usage
        purpose = exchange.purpose or "untagged"
        level = exchange.level or "untagged"
        summary.by_purpose[purpose] = summary.by_purpose.get(purpose, TokenUsage()) + usage
        summary.by_level[level] = summary.by_level.get(level, TokenUsage()) + usage
        key = (level, purpose)
        summary.by_level_and_purpose[key] = (
            summary.by_level_and_purpose.get(key, TokenUsage()) + usage
        )
    return summary
