"""Validation and grounding for parsed PDDL pairs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..state import RawState
from .syntax import DomainAst, Literal, ProblemAst

__all__ = [
    "CONFIG_PREFIXES",
    "GroundedOperator",
    "ValidationReport",
    "ground",
    "match_state_key",
    "validate",
]

# Object names in generated problem files omit configuration prefixes
# (e.g. the state key `unopened_black_jar` is named `black_jar`).
CONFIG_PREFIXES = ("unopened_", "locked_", "closed_", "blocked_")


@dataclass(frozen=True)
class Finding:
    severity: str  # "error" | "warning"
    code: str
    message: str


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    def add(self, severity: str, code: str, message: str) -> None:
        self.findings.append(Finding(severity, code, message))

    @property
    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == "error"]

    @property
    def warnings(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == "warning"]

    @property
    def ok(self) -> bool:
        return not self.errors

    def summary(self) -> str:
        if not self.findings:
            return "ok"
        return "; ".join(f"{f.severity}[{f.code}]: {f.message}" for f in self.findings)


def match_state_key(
    obj: str, state: RawState, prefixes: tuple[str, ...] = CONFIG_PREFIXES
) -> str | None:
    """State key named by a problem object, tolerating configuration prefixes."""
    if obj in state:
        return obj
    for key in state.keys():
        for prefix in prefixes:
            if key == prefix + obj:
                return key
    return None


def _spatial_name(name: str) -> bool:
    return name.startswith(("from", "to")) or name.endswith(("from", "to"))


def validate(
    domain: DomainAst,
    problem: ProblemAst | None = None,
    raw_state: RawState | None = None,
    prefixes: tuple[str, ...] = CONFIG_PREFIXES,
) -> ValidationReport:
    """Report naming, arity, and grounding violations; never raises."""
    report = ValidationReport()

    for name, kind in [(a.name, "action") for a in domain.actions] + [
        (p.name, "predicate") for p in domain.predicates
    ]:
        if "-" in name:
            report.add("error", "hyphen", f"hyphen in name: {kind} {name!r}")
        if name != name.lower():
            report.add("error", "case", f"{kind} name {name!r} is not lowercase")
        if kind == "predicate" and "_" in name:
            report.add("warning", "underscore", f"predicate {name!r} is not a single word")
        if _spatial_name(name):
            report.add("warning", "spatial", f"{kind} {name!r} looks like a spatial relation")

    declared = {p.name: p.arity for p in domain.predicates}
    known_types = domain.type_names()
    for action in domain.actions:
        for _, typ in action.params:
            if typ not in known_types:
                report.add("error", "type", f"action {action.name} uses unknown type {typ!r}")

    if problem is not None:
        if problem.domain and problem.domain != domain.name:
            report.add(
                "error",
                "domain_ref",
                f"problem targets domain {problem.domain!r}, not {domain.name!r}",
            )
        for _, typ in problem.objects:
            if typ not in known_types:
                report.add("error", "type", f"object of unknown type {typ!r}")
        for pred, args in sorted(problem.init):
            if pred not in declared:
                report.add("error", "undeclared", f"init uses undeclared predicate {pred!r}")
            elif declared[pred] != len(args):
                report.add("error", "arity", f"init literal ({pred} ...) has wrong arity")
        for lit in problem.goals:
            if lit.predicate not in declared:
                report.add("error", "undeclared", f"goal uses undeclared predicate {lit.predicate!r}")
            elif declared[lit.predicate] != len(lit.args):
                report.add("error", "arity", f"goal literal {lit} has wrong arity")
        if raw_state is not None:
            for obj in problem.object_names():
                if match_state_key(obj, raw_state, prefixes) is None:
                    report.add("error", "unknown_object", f"object {obj!r} not found in raw state")
    return report


@dataclass(frozen=True)
class GroundedOperator:
    """Action schema with all parameters bound to objects."""

    name: str
    args: tuple[str, ...]
    precondition: tuple[Literal, ...]
    effect: tuple[Literal, ...]

    def label(self) -> str:
        return f"{self.name}({', '.join(self.args)})"

    def pos_pre(self) -> frozenset[tuple[str, tuple[str, ...]]]:
        return frozenset((l.predicate, l.args) for l in self.precondition if l.positive)

    def neg_pre(self) -> frozenset[tuple[str, tuple[str, ...]]]:
        return frozenset((l.predicate, l.args) for l in self.precondition if not l.positive)

    def adds(self) -> frozenset[tuple[str, tuple[str, ...]]]:
        return frozenset((l.predicate, l.args) for l in self.effect if l.positive)

    def dels(self) -> frozenset[tuple[str, tuple[str, ...]]]:
        return frozenset((l.predicate, l.args) for l in self.effect if not l.positive)


def _bind(literals: tuple[Literal, ...], binding: dict[str, str]) -> tuple[Literal, ...]:
    return tuple(
        Literal(l.predicate, tuple(binding.get(a, a) for a in l.args), l.positive)
        for l in literals
    )


def ground(domain: DomainAst, problem: ProblemAst) -> tuple[GroundedOperator, ...]:
    """All type-consistent instantiations, lexicographic by (name, args)."""
    operators: list[GroundedOperator] = []
    objects = sorted(problem.objects)
    for action in sorted(domain.actions, key=lambda a: a.name):
        candidates = []
        for _, param_type in action.params:
            names = [n for n, t in objects if domain.is_subtype(t, param_type)]
            candidates.append(names)
        for combo in itertools.product(*candidates):
            binding = {var: obj for (var, _), obj in zip(action.params, combo)}
            operators.append(
                GroundedOperator(
                    action.name,
                    tuple(combo),
                    _bind(action.precondition, binding),
                    _bind(action.effect, binding),
                )
            )
    operators.sort(key=lambda op: (op.name, op.args))
    return tuple(operators)
