"""PDDL front end: parser, validator, grounder, and shortest-plan search."""

from .analysis import (
    CONFIG_PREFIXES,
    GroundedOperator,
    ValidationReport,
    ground,
    match_state_key,
    validate,
)
from .search import HighLevelPlan, ResourceLimit, Unsolvable, goals_satisfied, plan, simulate
from .syntax import (
    ActionSchema,
    DomainAst,
    Literal,
    ParseError,
    PddlError,
    PredicateDecl,
    ProblemAst,
    UnsupportedFeature,
    parse_document,
    parse_domain,
    parse_problem,
    pretty_domain,
    pretty_problem,
    split_forms,
)

__all__ = [
    "CONFIG_PREFIXES",
    "ActionSchema",
    "DomainAst",
    "GroundedOperator",
    "HighLevelPlan",
    "Literal",
    "ParseError",
    "PddlError",
    "PredicateDecl",
    "ProblemAst",
    "ResourceLimit",
    "Unsolvable",
    "UnsupportedFeature",
    "ValidationReport",
    "goals_satisfied",
    "ground",
    "match_state_key",
    "parse_document",
    "parse_domain",
    "parse_problem",
    "plan",
    "pretty_domain",
    "pretty_problem",
    "simulate",
    "split_forms",
    "validate",
]
