"""Sandboxed DSL for synthesized transition models and predicate classifiers."""

from .errors import (
    DslSyntaxError,
    RuntimeFault,
    SandboxViolation,
    StepBudgetExceeded,
    WmdslError,
)
from .interp import (
    DEFAULT_STEP_BUDGET,
    DIRECTIONS,
    builtin_catalog_text,
    builtin_library,
    run_predicate,
    run_transition,
)
from .parser import PredicateProgram, TransitionProgram, parse_program

__all__ = [
    "DEFAULT_STEP_BUDGET",
    "DIRECTIONS",
    "DslSyntaxError",
    "PredicateProgram",
    "RuntimeFault",
    "SandboxViolation",
    "StepBudgetExceeded",
    "TransitionProgram",
    "WmdslError",
    "builtin_catalog_text",
    "builtin_library",
    "parse_program",
    "run_predicate",
    "run_transition",
]
