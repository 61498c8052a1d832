"""Typed faults raised by the world-model DSL front end and interpreter.

Faults are data: the agent feeds them back into synthesis and revision
prompts, so every failure mode maps to one of these classes and none of
them should ever escape as a bare host exception.
"""

from __future__ import annotations

__all__ = [
    "DslSyntaxError",
    "RuntimeFault",
    "SandboxViolation",
    "StepBudgetExceeded",
    "WmdslError",
]


class WmdslError(Exception):
    """Base class for all DSL faults."""


class DslSyntaxError(WmdslError):
    """Source text does not parse."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class SandboxViolation(WmdslError):
    """Construct outside the sandboxed grammar (I/O, imports, while, ...)."""

    def __init__(self, message: str, line: int = 0):
        super().__init__(f"{message} (line {line})" if line else message)
        self.line = line


class StepBudgetExceeded(WmdslError):
    """Evaluation did not finish within the step budget."""


class RuntimeFault(WmdslError):
    """Typed evaluation fault (missing key, type mismatch, allocation, ...)."""

    def __init__(self, kind: str, message: str, line: int = 0):
        super().__init__(f"{kind}: {message}" + (f" (line {line})" if line else ""))
        self.kind = kind
        self.line = line
