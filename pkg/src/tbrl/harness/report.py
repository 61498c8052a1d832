"""Run reports: deterministic rows, exact totals, two renderings.

Compute wall time is logged, not serialized: replayed runs must produce
byte-identical reports, and host timing would break that.  Network
latency comes from recorded exchanges and is therefore stable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..agent import EpisodeResult

__all__ = ["RunReport", "emit_report", "row_from_result"]

PURPOSES = ("abstraction", "problem", "classifier", "world_model", "revision")


@dataclass(frozen=True)
class ReportRow:
    level: str
    solved: bool
    first_plan_success: bool
    tokens: dict[str, int]
    total_tokens: int
    revisions: int
    explorations: int
    network_ms: int
    notes: tuple[str, ...] = ()


def row_from_result(result: EpisodeResult) -> ReportRow:
    tokens = {p: result.usage.purpose_total(p) for p in PURPOSES}
    return ReportRow(
        level=result.level,
        solved=result.solved,
        first_plan_success=result.first_plan_success,
        tokens=tokens,
        total_tokens=result.usage.total.total,
        revisions=result.revisions,
        explorations=result.explorations,
        network_ms=result.network_ms,
        notes=tuple(result.notes + result.grounding_defects),
    )


@dataclass
class RunReport:
    mode: str
    rows: list[ReportRow] = field(default_factory=list)

    @property
    def solved_count(self) -> int:
        return sum(1 for r in self.rows if r.solved)

    @property
    def all_solved(self) -> bool:
        return bool(self.rows) and self.solved_count == len(self.rows)

    def totals(self) -> ReportRow:
        tokens = {p: sum(r.tokens[p] for r in self.rows) for p in PURPOSES}
        return ReportRow(
            level="total",
            solved=self.all_solved,
            first_plan_success=all(r.first_plan_success for r in self.rows) if self.rows else False,
            tokens=tokens,
            total_tokens=sum(r.total_tokens for r in self.rows),
            revisions=sum(r.revisions for r in self.rows),
            explorations=sum(r.explorations for r in self.rows),
            network_ms=sum(r.network_ms for r in self.rows),
        )

    def to_dict(self) -> dict:
        def row_dict(row: ReportRow) -> dict:
            return {
                "level": row.level,
                "solved": row.solved,
                "first_plan_success": row.first_plan_success,
                "tokens": dict(sorted(row.tokens.items())),
                "total_tokens": row.total_tokens,
                "revisions": row.revisions,
                "explorations": row.explorations,
                "network_ms": row.network_ms,
                "notes": list(row.notes),
            }

        return {
            "mode": self.mode,
            "levels": [row_dict(r) for r in self.rows],
            "totals": row_dict(self.totals()),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunReport":
        report = cls(mode=data["mode"])
        for row in data["levels"]:
            report.rows.append(
                ReportRow(
                    level=row["level"],
                    solved=row["solved"],
                    first_plan_success=row["first_plan_success"],
                    tokens=row["tokens"],
                    total_tokens=row["total_tokens"],
                    revisions=row["revisions"],
                    explorations=row["explorations"],
                    network_ms=row["network_ms"],
                    notes=tuple(row.get("notes", ())),
                )
            )
        return report


def emit_report(report: RunReport, format: str = "table") -> str:
    """Render a report; both formats are byte-deterministic."""
    if format == "structured":
        return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    if format != "table":
        raise ValueError(f"unknown report format {format!r}")

    headers = ["level", "solved"] + list(PURPOSES) + ["total", "revs", "expl"]
    rows_text = []
    for row in report.rows + [report.totals()]:
        rows_text.append(
            [
                row.level,
                "yes" if row.solved else "NO",
                *(str(row.tokens[p]) for p in PURPOSES),
                str(row.total_tokens),
                str(row.revisions),
                str(row.explorations),
            ]
        )
    widths = [max(len(h), *(len(r[i]) for r in rows_text)) for i, h in enumerate(headers)]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)),
        "  ".join("-" * w for w in widths),
    ]
    for i, cells in enumerate(rows_text):
        if i == len(rows_text) - 1:
            lines.append("  ".join("-" * w for w in widths))
        lines.append("  ".join(c.ljust(widths[i]) for i, c in enumerate(cells)))
    flagged = [r for r in report.rows if not r.solved]
    for row in flagged:
        for note in row.notes:
            lines.append(f"! {row.level}: {note}")
    return "\n".join(lines) + "\n"
