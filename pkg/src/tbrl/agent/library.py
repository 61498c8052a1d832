"""Library of learned abstractions, carried across episodes.

Persists as a directory: ``domain.pddl``, ``classifiers/*.wmdsl``,
``worldmodels/*.wmdsl``, and a ``manifest.json`` with provenance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..pddl import DomainAst, parse_domain, pretty_domain
from ..wmdsl import PredicateProgram, TransitionProgram, parse_program

__all__ = ["AbstractionLibrary"]


@dataclass
class AbstractionLibrary:
    domain: DomainAst | None = None
    classifiers: dict[str, PredicateProgram] = field(default_factory=dict)
    world_models: dict[str, TransitionProgram] = field(default_factory=dict)
    ungrounded: set[str] = field(default_factory=set)
    provenance: list[dict] = field(default_factory=list)

    def note(self, episode: str, what: str) -> None:
        self.provenance.append({"episode": episode, "added": what})

    def merge_domain(self, domain: DomainAst, episode: str) -> None:
        """Add new predicates/operators; existing ones are kept as-is."""
        if self.domain is None:
            self.domain = domain
            self.note(episode, f"domain {domain.name}")
            return
        known_preds = {p.name for p in self.domain.predicates}
        known_actions = {a.name for a in self.domain.actions}
        new_preds = tuple(p for p in domain.predicates if p.name not in known_preds)
        new_actions = tuple(a for a in domain.actions if a.name not in known_actions)
        if not new_preds and not new_actions:
            return
        known_types = {t for t, _ in self.domain.types}
        new_types = tuple(t for t in domain.types if t[0] not in known_types)
        self.domain = DomainAst(
            self.domain.name,
            self.domain.requirements,
            self.domain.types + new_types,
            self.domain.predicates + new_preds,
            self.domain.actions + new_actions,
        )
        for action in new_actions:
            self.note(episode, f"operator {action.name}")
        for pred in new_preds:
            self.note(episode, f"predicate {pred.name}")

    def grounded_for(self, predicates: set[str]) -> bool:
        return all(p in self.classifiers for p in predicates)

    def save(self, root: str | Path) -> None:
        root = Path(root)
        root.mkdir(parents=True, exist_ok=True)
        if self.domain is not None:
            (root / "domain.pddl").write_text(pretty_domain(self.domain), encoding="utf-8")
        cls_dir = root / "classifiers"
        cls_dir.mkdir(exist_ok=True)
        for name, program in sorted(self.classifiers.items()):
            (cls_dir / f"{name}.wmdsl").write_text(program.source, encoding="utf-8")
        wm_dir = root / "worldmodels"
        wm_dir.mkdir(exist_ok=True)
        for name, program in sorted(self.world_models.items()):
            (wm_dir / f"{name}.wmdsl").write_text(program.source, encoding="utf-8")
        manifest = {
            "ungrounded": sorted(self.ungrounded),
            "provenance": self.provenance,
        }
        (root / "manifest.json").write_text(
            json.dumps(manifest, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
        )

    @classmethod
    def load(cls, root: str | Path) -> "AbstractionLibrary":
        root = Path(root)
        library = cls()
        domain_file = root / "domain.pddl"
        if domain_file.exists():
            library.domain = parse_domain(domain_file.read_text(encoding="utf-8"))
        for path in sorted((root / "classifiers").glob("*.wmdsl")):
            library.classifiers[path.stem] = parse_program(
                path.read_text(encoding="utf-8"), "predicate", name=path.stem
            )
        for path in sorted((root / "worldmodels").glob("*.wmdsl")):
            library.world_models[path.stem] = parse_program(
                path.read_text(encoding="utf-8"), "transition"
            )
        manifest_file = root / "manifest.json"
        if manifest_file.exists():
            manifest = json.loads(manifest_file.read_text(encoding="utf-8"))
            library.ungrounded = set(manifest.get("ungrounded", []))
            library.provenance = list(manifest.get("provenance", []))
        return library
