"""Grammar front end for the world-model DSL.

The surface syntax is a strict subset of Python, so parsing reuses the
host ``ast`` module; everything outside the subset is rejected here,
before any evaluation happens.  Transition programs define
``transition(state, action)``; predicate classifiers define
``holds(state, arg1, ..., argN)``.  Helper functions are allowed, but
recursion, higher-order use, I/O, imports other than ``from utils
import ...``, and ``while`` loops are not.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field

from .errors import DslSyntaxError, SandboxViolation

__all__ = ["PredicateProgram", "TransitionProgram", "parse_program"]

TRANSITION_ENTRY = "transition"
PREDICATE_ENTRY = "holds"

# Names importable via `from utils import ...` and callable as functions.
BUILTIN_NAMES = frozenset(
    {
        "abs",
        "append",
        "contains",
        "copy",
        "get",
        "has_prefix",
        "has_suffix",
        "len",
        "manhattan",
        "max",
        "min",
        "remove",
        "shift",
        "sorted",
        "str",
        "strip_prefix",
        "strip_suffix",
        "swap_prefix",
    }
)
BUILTIN_CONSTANTS = frozenset({"directions", "none", "true", "false"})

# Methods callable on values, by attribute name (type checks happen at
# evaluation time).
METHOD_NAMES = frozenset(
    {
        "append",
        "copy",
        "count",
        "endswith",
        "extend",
        "get",
        "index",
        "insert",
        "items",
        "join",
        "keys",
        "lower",
        "pop",
        "remove",
        "replace",
        "setdefault",
        "split",
        "startswith",
        "strip",
        "update",
        "upper",
        "values",
    }
)

_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.FloorDiv, ast.Mod)
_ALLOWED_CMPOPS = (ast.Eq, ast.NotEq, ast.Lt, ast.LtE, ast.Gt, ast.GtE, ast.In, ast.NotIn, ast.Is, ast.IsNot)


@dataclass(frozen=True)
class _FuncDef:
    name: str
    params: tuple[str, ...]
    body: tuple[ast.stmt, ...] = field(compare=False, repr=False, hash=False)


@dataclass(frozen=True)
class _Program:
    source: str
    entry: str = field(compare=False)
    functions: tuple[_FuncDef, ...] = field(compare=False, repr=False)

    @property
    def entry_params(self) -> tuple[str, ...]:
        for fn in self.functions:
            if fn.name == self.entry:
                return fn.params
        raise AssertionError("entry function missing")  # pragma: no cover


@dataclass(frozen=True)
class TransitionProgram(_Program):
    """Executable model of the environment transition function."""


@dataclass(frozen=True)
class PredicateProgram(_Program):
    """Executable boolean grounding of one PDDL predicate."""

    name: str = ""

    @property
    def arity(self) -> int:
        return len(self.entry_params) - 1


def parse_program(
    text: str, kind: str, name: str = ""
) -> TransitionProgram | PredicateProgram:
    """Parse and sandbox-check a program; raises DslSyntaxError or
    SandboxViolation."""
    if kind not in ("transition", "predicate"):
        raise ValueError(f"unknown program kind {kind!r}")
    try:
        module = ast.parse(text)
    except SyntaxError as exc:
        raise DslSyntaxError(exc.msg or "syntax error", exc.lineno or 0, exc.offset or 0) from None

    defined = {
        n.name for n in ast.walk(module) if isinstance(n, ast.FunctionDef)
    }
    functions: list[_FuncDef] = []
    for node in module.body:
        if isinstance(node, ast.ImportFrom):
            _check_import(node)
        elif isinstance(node, ast.FunctionDef):
            functions.append(_check_function(node, defined))
        elif isinstance(node, ast.Expr) and isinstance(node.value, ast.Constant) and isinstance(node.value.value, str):
            continue  # module docstring
        else:
            raise SandboxViolation(
                f"top-level {type(node).__name__} is not allowed", getattr(node, "lineno", 0)
            )

    entry = TRANSITION_ENTRY if kind == "transition" else PREDICATE_ENTRY
    entries = [fn for fn in functions if fn.name == entry]
    if len(entries) != 1:
        raise SandboxViolation(
            f"program must define exactly one `{entry}` function, found {len(entries)}"
        )
    if kind == "transition" and len(entries[0].params) != 2:
        raise SandboxViolation("transition(state, action) takes exactly 2 parameters")
    if kind == "predicate" and len(entries[0].params) < 1:
        raise SandboxViolation("holds(state, ...) takes at least the state parameter")

    if kind == "transition":
        return TransitionProgram(text, entry, tuple(functions))
    return PredicateProgram(text, entry, tuple(functions), name=name)


def _check_import(node: ast.ImportFrom) -> None:
    if node.module != "utils":
        raise SandboxViolation(f"import from {node.module!r} is not allowed", node.lineno)
    for alias in node.names:
        if alias.name not in BUILTIN_NAMES | BUILTIN_CONSTANTS:
            raise SandboxViolation(f"unknown utils name {alias.name!r}", node.lineno)
        if alias.asname:
            raise SandboxViolation("import aliases are not allowed", node.lineno)


def _check_function(node: ast.FunctionDef, defined: set[str]) -> _FuncDef:
    if node.decorator_list:
        raise SandboxViolation("decorators are not allowed", node.lineno)
    args = node.args
    if args.posonlyargs or args.kwonlyargs or args.vararg or args.kwarg or args.defaults or args.kw_defaults:
        raise SandboxViolation(
            f"function {node.name} may only take plain positional parameters", node.lineno
        )
    params = tuple(a.arg for a in args.args)
    _Checker(node.name, defined).check_block(node.body)
    return _FuncDef(node.name, params, tuple(node.body))


class _Checker:
    """Whitelist walk over one function body."""

    def __init__(self, func_name: str, defined: set[str]):
        self.func_name = func_name
        self.defined = defined

    def fail(self, node: ast.AST, what: str) -> None:
        raise SandboxViolation(f"{what} is not allowed", getattr(node, "lineno", 0))

    def check_block(self, body: list[ast.stmt]) -> None:
        for stmt in body:
            self.check_stmt(stmt)

    def check_stmt(self, node: ast.stmt) -> None:
        if isinstance(node, ast.FunctionDef):
            if node.name == self.func_name:
                self.fail(node, "shadowing the enclosing function")
            _check_function(node, self.defined)
        elif isinstance(node, ast.Return):
            if node.value is not None:
                self.check_expr(node.value)
        elif isinstance(node, ast.Assign):
            if len(node.targets) != 1:
                self.fail(node, "chained assignment")
            self.check_target(node.targets[0])
            self.check_expr(node.value)
        elif isinstance(node, ast.AugAssign):
            if not isinstance(node.op, _ALLOWED_BINOPS):
                self.fail(node, f"augmented operator {type(node.op).__name__}")
            self.check_target(node.target)
            self.check_expr(node.value)
        elif isinstance(node, ast.Expr):
            self.check_expr(node.value)
        elif isinstance(node, ast.If):
            self.check_expr(node.test)
            self.check_block(node.body)
            self.check_block(node.orelse)
        elif isinstance(node, ast.For):
            if node.orelse:
                self.fail(node, "for-else")
            self.check_target(node.target)
            self.check_expr(node.iter)
            self.check_block(node.body)
        elif isinstance(node, ast.While):
            self.fail(node, "while loop (loops must range over finite collections)")
        elif isinstance(node, (ast.Break, ast.Continue, ast.Pass)):
            return
        elif isinstance(node, ast.Delete):
            for target in node.targets:
                if not isinstance(target, ast.Subscript):
                    self.fail(node, "del of a non-subscript")
                self.check_expr(target.value)
                self.check_expr(target.slice)
        else:
            self.fail(node, f"statement {type(node).__name__}")

    def check_target(self, node: ast.expr) -> None:
        if isinstance(node, ast.Name):
            if node.id in BUILTIN_CONSTANTS:
                self.fail(node, f"assignment to reserved name {node.id!r}")
            return
        if isinstance(node, ast.Subscript):
            self.check_expr(node.value)
            self.check_expr(node.slice)
            return
        if isinstance(node, ast.Tuple):
            for elt in node.elts:
                if not isinstance(elt, ast.Name):
                    self.fail(node, "nested unpacking")
            return
        self.fail(node, f"assignment target {type(node).__name__}")

    def check_expr(self, node: ast.expr) -> None:
        if isinstance(node, ast.Constant):
            if node.value is None or isinstance(node.value, (bool, int, str)):
                return
            self.fail(node, f"literal of type {type(node.value).__name__}")
        elif isinstance(node, ast.Name):
            return
        elif isinstance(node, ast.BoolOp):
            for value in node.values:
                self.check_expr(value)
        elif isinstance(node, ast.BinOp):
            if not isinstance(node.op, _ALLOWED_BINOPS):
                self.fail(node, f"operator {type(node.op).__name__}")
            self.check_expr(node.left)
            self.check_expr(node.right)
        elif isinstance(node, ast.UnaryOp):
            if not isinstance(node.op, (ast.Not, ast.USub, ast.UAdd)):
                self.fail(node, f"operator {type(node.op).__name__}")
            self.check_expr(node.operand)
        elif isinstance(node, ast.Compare):
            for op in node.ops:
                if not isinstance(op, _ALLOWED_CMPOPS):
                    self.fail(node, f"comparison {type(op).__name__}")
            self.check_expr(node.left)
            for comp in node.comparators:
                self.check_expr(comp)
        elif isinstance(node, ast.Call):
            self.check_call(node)
        elif isinstance(node, ast.Subscript):
            if isinstance(node.slice, ast.Slice):
                self.fail(node, "slicing")
            self.check_expr(node.value)
            self.check_expr(node.slice)
        elif isinstance(node, (ast.List, ast.Tuple)):
            for elt in node.elts:
                self.check_expr(elt)
        elif isinstance(node, ast.Dict):
            for key in node.keys:
                if key is None:
                    self.fail(node, "dict unpacking")
                self.check_expr(key)
            for value in node.values:
                self.check_expr(value)
        elif isinstance(node, ast.JoinedStr):
            for part in node.values:
                if isinstance(part, ast.FormattedValue):
                    if part.format_spec is not None:
                        self.fail(node, "format specifiers")
                    self.check_expr(part.value)
        elif isinstance(node, ast.IfExp):
            self.check_expr(node.test)
            self.check_expr(node.body)
            self.check_expr(node.orelse)
        elif isinstance(node, ast.Attribute):
            self.fail(node, "attribute access outside a method call")
        else:
            self.fail(node, f"expression {type(node).__name__}")

    def check_call(self, node: ast.Call) -> None:
        if node.keywords:
            self.fail(node, "keyword arguments")
        func = node.func
        if isinstance(func, ast.Name):
            if func.id == self.func_name:
                self.fail(node, f"recursive call to {self.func_name}")
            if func.id not in BUILTIN_NAMES and func.id not in self.defined:
                self.fail(node, f"call to unknown function {func.id!r}")
        elif isinstance(func, ast.Attribute):
            if func.attr.startswith("_") or func.attr not in METHOD_NAMES:
                self.fail(node, f"method .{func.attr}()")
            if isinstance(func.value, ast.Attribute):
                self.fail(node, "chained attribute access")
            self.check_expr(func.value)
        else:
            self.fail(node, "calling a computed expression")
        for arg in node.args:
            self.check_expr(arg)
