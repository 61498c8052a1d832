"""Bounded tree-walking evaluator for sandboxed world-model programs.

Evaluation is pure: the input state is deep-copied on entry, the result
is canonicalized on exit, and there is no channel to the clock, the
filesystem, or anything else outside the arguments.  Every expression
and statement visit costs one step against the budget; collections are
capped in size, so every call terminates with a value or a typed fault.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass

from ..state import Action, RawState, StateError, canonicalize
from .errors import RuntimeFault, StepBudgetExceeded
from .parser import (
    BUILTIN_NAMES,
    PredicateProgram,
    TransitionProgram,
    _FuncDef,
    _Program,
)

__all__ = [
    "DEFAULT_STEP_BUDGET",
    "DIRECTIONS",
    "builtin_library",
    "builtin_catalog_text",
    "run_predicate",
    "run_transition",
]

DEFAULT_STEP_BUDGET = 100_000
ALLOCATION_LIMIT = 1_000_000

# Screen coordinates: x grows rightward, y grows downward.
DIRECTIONS = {"up": [0, -1], "down": [0, 1], "left": [-1, 0], "right": [1, 0]}


def _type_name(value: object) -> str:
    return {bool: "bool", int: "int", str: "str", list: "list", dict: "map", type(None): "none"}.get(
        type(value), type(value).__name__
    )


def _fault(kind: str, message: str, line: int = 0) -> RuntimeFault:
    return RuntimeFault(kind, message, line)


def _deep_copy(value, depth=0):
    if depth > 32:
        raise _fault("depth", "value nesting too deep")
    if isinstance(value, list):
        return [_deep_copy(v, depth + 1) for v in value]
    if isinstance(value, dict):
        return {k: _deep_copy(v, depth + 1) for k, v in value.items()}
    return value


# ---------------------------------------------------------------------------
# Builtin catalog


def _bi_get(m, key, default=None):
    if not isinstance(m, dict):
        raise _fault("type", f"get() expects a map, got {_type_name(m)}")
    return m.get(key, default)


def _bi_len(x):
    if isinstance(x, (list, dict, str)):
        return len(x)
    raise _fault("type", f"len() of {_type_name(x)}")


def _bi_sorted(xs):
    if not isinstance(xs, list):
        raise _fault("type", f"sorted() expects a list, got {_type_name(xs)}")
    try:
        return sorted(xs, key=_sort_key)
    except TypeError:
        raise _fault("type", "sorted() over mixed element types") from None


def _sort_key(v):
    if isinstance(v, list):
        return (2, [_sort_key(x) for x in v])
    if isinstance(v, str):
        return (1, v)
    if isinstance(v, (bool, int)):
        return (0, int(v))
    raise TypeError("unorderable")


def _bi_abs(x):
    if isinstance(x, bool) or not isinstance(x, int):
        raise _fault("type", f"abs() of {_type_name(x)}")
    return abs(x)


def _bi_min(*args):
    return _bi_extreme(min, args)


def _bi_max(*args):
    return _bi_extreme(max, args)


def _bi_extreme(fn, args):
    values = args[0] if len(args) == 1 and isinstance(args[0], list) else list(args)
    if not values:
        raise _fault("value", f"{fn.__name__}() of empty collection")
    try:
        return fn(values, key=_sort_key)
    except TypeError:
        raise _fault("type", f"{fn.__name__}() over mixed element types") from None


def _bi_str(x):
    return _to_text(x)


def _bi_copy(x):
    return _deep_copy(x)


def _bi_contains(coll, item):
    if isinstance(coll, (list, dict)):
        return item in coll
    if isinstance(coll, str):
        if not isinstance(item, str):
            raise _fault("type", "substring test needs a string")
        return item in coll
    raise _fault("type", f"contains() on {_type_name(coll)}")


def _bi_append(xs, item):
    if not isinstance(xs, list):
        raise _fault("type", f"append() expects a list, got {_type_name(xs)}")
    if len(xs) >= ALLOCATION_LIMIT:
        raise _fault("allocation", "list exceeds the allocation limit")
    xs.append(item)
    return None


def _bi_remove(xs, item):
    if isinstance(xs, list):
        if item not in xs:
            raise _fault("value", f"remove(): {item!r} not in list")
        xs.remove(item)
        return None
    if isinstance(xs, dict):
        if item not in xs:
            raise _fault("missing_key", f"remove(): key {item!r} not in map")
        del xs[item]
        return None
    raise _fault("type", f"remove() on {_type_name(xs)}")


def _pair(p, what):
    if not (isinstance(p, list) and len(p) == 2 and all(isinstance(c, int) and not isinstance(c, bool) for c in p)):
        raise _fault("type", f"{what} expects an [x, y] pair, got {p!r}")
    return p


def _bi_shift(pos, delta):
    pos = _pair(pos, "shift()")
    delta = _pair(delta, "shift()")
    return [pos[0] + delta[0], pos[1] + delta[1]]


def _bi_manhattan(a, b):
    a = _pair(a, "manhattan()")
    b = _pair(b, "manhattan()")
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def _text_arg(s, what):
    if not isinstance(s, str):
        raise _fault("type", f"{what} expects strings")
    return s


def _bi_has_prefix(s, prefix):
    return _text_arg(s, "has_prefix()").startswith(_text_arg(prefix, "has_prefix()"))


def _bi_has_suffix(s, suffix):
    return _text_arg(s, "has_suffix()").endswith(_text_arg(suffix, "has_suffix()"))


def _bi_strip_prefix(s, prefix):
    s = _text_arg(s, "strip_prefix()")
    prefix = _text_arg(prefix, "strip_prefix()")
    return s[len(prefix):] if s.startswith(prefix) else s


def _bi_strip_suffix(s, suffix):
    s = _text_arg(s, "strip_suffix()")
    suffix = _text_arg(suffix, "strip_suffix()")
    return s[: len(s) - len(suffix)] if suffix and s.endswith(suffix) else s


def _bi_swap_prefix(s, old, new):
    s = _text_arg(s, "swap_prefix()")
    old = _text_arg(old, "swap_prefix()")
    new = _text_arg(new, "swap_prefix()")
    return new + s[len(old):] if s.startswith(old) else s


_BUILTIN_IMPLS = {
    "abs": _bi_abs,
    "append": _bi_append,
    "contains": _bi_contains,
    "copy": _bi_copy,
    "get": _bi_get,
    "has_prefix": _bi_has_prefix,
    "has_suffix": _bi_has_suffix,
    "len": _bi_len,
    "manhattan": _bi_manhattan,
    "max": _bi_max,
    "min": _bi_min,
    "remove": _bi_remove,
    "shift": _bi_shift,
    "sorted": _bi_sorted,
    "str": _bi_str,
    "strip_prefix": _bi_strip_prefix,
    "strip_suffix": _bi_strip_suffix,
    "swap_prefix": _bi_swap_prefix,
}

_BUILTIN_DOCS = {
    "get": "get(map, key, default) -> value at key, or default when absent",
    "len": "len(x) -> size of a list, map, or string",
    "sorted": "sorted(xs) -> new list in canonical order",
    "abs": "abs(i) -> absolute value",
    "min": "min(xs) / min(a, b, ...) -> smallest element",
    "max": "max(xs) / max(a, b, ...) -> largest element",
    "str": "str(x) -> text rendering of a value",
    "copy": "copy(x) -> deep copy of a value",
    "contains": "contains(coll, x) -> membership test for lists, maps, strings",
    "append": "append(xs, x) -> add x at the end of list xs",
    "remove": "remove(coll, x) -> delete x from a list or a key from a map",
    "shift": "shift(pos, delta) -> [x+dx, y+dy] positional arithmetic",
    "manhattan": "manhattan(a, b) -> |ax-bx| + |ay-by|",
    "has_prefix": "has_prefix(s, p) -> True when s starts with p",
    "has_suffix": "has_suffix(s, p) -> True when s ends with p",
    "strip_prefix": "strip_prefix(s, p) -> s without a leading p",
    "strip_suffix": "strip_suffix(s, p) -> s without a trailing p",
    "swap_prefix": "swap_prefix(s, old, new) -> s with a leading old replaced by new",
    "directions": "directions -> map of move names to unit vectors: "
    "up [0,-1], down [0,1], left [-1,0], right [1,0]",
}

assert set(_BUILTIN_IMPLS) == set(BUILTIN_NAMES)


def builtin_library() -> dict[str, str]:
    """Catalog of builtin callables and constants with one-line docs."""
    return dict(_BUILTIN_DOCS)


def builtin_catalog_text() -> str:
    """Deterministic documentation block used in synthesis prompts."""
    lines = [
        "Language: a small Python-like subset.",
        "Allowed: assignment, if/elif/else, for-loops over collections,",
        "list/map/string literals (f-strings included), del map[key],",
        "helper functions without recursion, and the builtins below.",
        "Not allowed: while loops, imports (except `from utils import ...`),",
        "comprehensions, floats, I/O of any kind.",
        "Methods available on values: map.get/.copy/.keys/.values/.items/",
        ".pop/.setdefault/.update, list.append/.remove/.pop/.insert/.index/",
        ".count/.extend/.copy, str.startswith/.endswith/.split/.replace/",
        ".strip/.lower/.upper/.join.",
        "",
        "Builtins:",
    ]
    lines += [f"  {_BUILTIN_DOCS[name]}" for name in sorted(_BUILTIN_DOCS)]
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Evaluator


class _Return(Exception):
    def __init__(self, value):
        self.value = value


class _Break(Exception):
    pass


class _Continue(Exception):
    pass


@dataclass
class _Frame:
    locals: dict
    functions: dict


class _Interpreter:
    def __init__(self, program: _Program, step_budget: int):
        self.program = program
        self.budget = step_budget
        self.steps = 0
        self.module_functions = {fn.name: fn for fn in program.functions}
        self.call_stack: list[str] = []

    def tick(self, node: ast.AST | None = None) -> None:
        self.steps += 1
        if self.steps > self.budget:
            raise StepBudgetExceeded(f"exceeded {self.budget} evaluation steps")

    def call_entry(self, args: list) -> object:
        entry = self.module_functions[self.program.entry]
        return self.call_function(entry, args, line=0)

    def call_function(self, fn: _FuncDef, args: list, line: int) -> object:
        if fn.name in self.call_stack:
            raise _fault("recursion", f"recursive call to {fn.name}", line)
        if len(args) != len(fn.params):
            raise _fault(
                "arity", f"{fn.name}() takes {len(fn.params)} arguments, got {len(args)}", line
            )
        frame = _Frame(dict(zip(fn.params, args)), {})
        self.call_stack.append(fn.name)
        try:
            self.exec_block(list(fn.body), frame)
        except _Return as ret:
            return ret.value
        finally:
            self.call_stack.pop()
        return None

    # -- statements ---------------------------------------------------------

    def exec_block(self, body: list[ast.stmt], frame: _Frame) -> None:
        for stmt in body:
            self.exec_stmt(stmt, frame)

    def exec_stmt(self, node: ast.stmt, frame: _Frame) -> None:
        self.tick(node)
        if isinstance(node, ast.FunctionDef):
            params = tuple(a.arg for a in node.args.args)
            frame.functions[node.name] = _FuncDef(node.name, params, tuple(node.body))
        elif isinstance(node, ast.Return):
            raise _Return(self.eval(node.value, frame) if node.value else None)
        elif isinstance(node, ast.Assign):
            value = self.eval(node.value, frame)
            self.assign(node.targets[0], value, frame)
        elif isinstance(node, ast.AugAssign):
            current = self.eval_target(node.target, frame)
            value = self.binop(node.op, current, self.eval(node.value, frame), node.lineno)
            self.assign(node.target, value, frame)
        elif isinstance(node, ast.Expr):
            self.eval(node.value, frame)
        elif isinstance(node, ast.If):
            branch = node.body if self.truthy(self.eval(node.test, frame)) else node.orelse
            self.exec_block(branch, frame)
        elif isinstance(node, ast.For):
            self.exec_for(node, frame)
        elif isinstance(node, ast.Break):
            raise _Break()
        elif isinstance(node, ast.Continue):
            raise _Continue()
        elif isinstance(node, ast.Pass):
            return
        elif isinstance(node, ast.Delete):
            for target in node.targets:
                self.delete(target, frame)
        else:  # pragma: no cover - parser rejects everything else
            raise _fault("internal", f"unhandled statement {type(node).__name__}")

    def exec_for(self, node: ast.For, frame: _Frame) -> None:
        iterable = self.eval(node.iter, frame)
        if isinstance(iterable, dict):
            items = list(iterable.keys())  # snapshot: safe under mutation
            fetch = lambda i: items[i]
            count = lambda: len(items)
        elif isinstance(iterable, list):
            # Live iteration by index, like the host language: growing the
            # list inside the loop keeps the loop running (and eventually
            # trips the step budget).
            fetch = lambda i: iterable[i]
            count = lambda: len(iterable)
        elif isinstance(iterable, str):
            fetch = lambda i: iterable[i]
            count = lambda: len(iterable)
        else:
            raise _fault("type", f"cannot iterate over {_type_name(iterable)}", node.lineno)
        i = 0
        while i < count():
            self.tick(node)
            self.bind_loop_target(node.target, fetch(i), frame)
            try:
                self.exec_block(node.body, frame)
            except _Break:
                return
            except _Continue:
                pass
            i += 1

    def bind_loop_target(self, target: ast.expr, value, frame: _Frame) -> None:
        if isinstance(target, ast.Name):
            frame.locals[target.id] = value
            return
        if isinstance(target, ast.Tuple):
            if not isinstance(value, list) or len(value) != len(target.elts):
                raise _fault(
                    "type", f"cannot unpack {value!r} into {len(target.elts)} names", target.lineno
                )
            for elt, item in zip(target.elts, value):
                frame.locals[elt.id] = item  # type: ignore[union-attr]
            return
        raise _fault("internal", "bad loop target")  # pragma: no cover

    def assign(self, target: ast.expr, value, frame: _Frame) -> None:
        if isinstance(target, ast.Name):
            frame.locals[target.id] = value
        elif isinstance(target, ast.Tuple):
            self.bind_loop_target(target, value, frame)
        elif isinstance(target, ast.Subscript):
            container = self.eval(target.value, frame)
            key = self.eval(target.slice, frame)
            if isinstance(container, dict):
                if not isinstance(key, str):
                    raise _fault("type", "map keys must be strings", target.lineno)
                if key not in container and len(container) >= ALLOCATION_LIMIT:
                    raise _fault("allocation", "map exceeds the allocation limit", target.lineno)
                container[key] = value
            elif isinstance(container, list):
                idx = self.int_index(key, target.lineno)
                try:
                    container[idx] = value
                except IndexError:
                    raise _fault("index", f"list index {idx} out of range", target.lineno) from None
            else:
                raise _fault("type", f"cannot index-assign {_type_name(container)}", target.lineno)
        else:  # pragma: no cover - parser rejects
            raise _fault("internal", "bad assignment target")

    def eval_target(self, target: ast.expr, frame: _Frame):
        if isinstance(target, ast.Name):
            return self.lookup(target, frame)
        return self.eval(target, frame)

    def delete(self, target: ast.Subscript, frame: _Frame) -> None:
        container = self.eval(target.value, frame)
        key = self.eval(target.slice, frame)
        if isinstance(container, dict):
            if key not in container:
                raise _fault("missing_key", f"del of missing key {key!r}", target.lineno)
            del container[key]
        elif isinstance(container, list):
            idx = self.int_index(key, target.lineno)
            try:
                del container[idx]
            except IndexError:
                raise _fault("index", f"list index {idx} out of range", target.lineno) from None
        else:
            raise _fault("type", f"cannot delete from {_type_name(container)}", target.lineno)

    # -- expressions --------------------------------------------------------

    def eval(self, node: ast.expr, frame: _Frame):
        self.tick(node)
        if isinstance(node, ast.Constant):
            return node.value
        if isinstance(node, ast.Name):
            return self.lookup(node, frame)
        if isinstance(node, ast.List):
            return [self.eval(e, frame) for e in node.elts]
        if isinstance(node, ast.Tuple):
            return [self.eval(e, frame) for e in node.elts]
        if isinstance(node, ast.Dict):
            out = {}
            for k, v in zip(node.keys, node.values):
                key = self.eval(k, frame)
                if not isinstance(key, str):
                    raise _fault("type", "map keys must be strings", node.lineno)
                out[key] = self.eval(v, frame)
            return out
        if isinstance(node, ast.BoolOp):
            if isinstance(node.op, ast.And):
                result: object = True
                for sub in node.values:
                    result = self.eval(sub, frame)
                    if not self.truthy(result):
                        return result
                return result
            for sub in node.values:
                result = self.eval(sub, frame)
                if self.truthy(result):
                    return result
            return result
        if isinstance(node, ast.UnaryOp):
            operand = self.eval(node.operand, frame)
            if isinstance(node.op, ast.Not):
                return not self.truthy(operand)
            if not isinstance(operand, int) or isinstance(operand, bool):
                raise _fault("type", f"unary +/- on {_type_name(operand)}", node.lineno)
            return -operand if isinstance(node.op, ast.USub) else operand
        if isinstance(node, ast.BinOp):
            left = self.eval(node.left, frame)
            right = self.eval(node.right, frame)
            return self.binop(node.op, left, right, node.lineno)
        if isinstance(node, ast.Compare):
            return self.compare(node, frame)
        if isinstance(node, ast.Subscript):
            return self.subscript(node, frame)
        if isinstance(node, ast.Call):
            return self.call(node, frame)
        if isinstance(node, ast.IfExp):
            if self.truthy(self.eval(node.test, frame)):
                return self.eval(node.body, frame)
            return self.eval(node.orelse, frame)
        if isinstance(node, ast.JoinedStr):
            parts = []
            for part in node.values:
                if isinstance(part, ast.Constant):
                    parts.append(part.value)
                else:
                    parts.append(_to_text(self.eval(part.value, frame)))
            return "".join(parts)
        raise _fault("internal", f"unhandled expression {type(node).__name__}")  # pragma: no cover

    def lookup(self, node: ast.Name, frame: _Frame):
        name = node.id
        if name in frame.locals:
            return frame.locals[name]
        if name == "directions":
            return _deep_copy(DIRECTIONS)
        if name in ("none", "None"):
            return None
        if name in ("true", "True"):
            return True
        if name in ("false", "False"):
            return False
        raise _fault("name", f"name {name!r} is not defined", node.lineno)

    def binop(self, op: ast.operator, left, right, line: int):
        if isinstance(op, ast.Add):
            if self.is_int(left) and self.is_int(right):
                return left + right
            if isinstance(left, str) and isinstance(right, str):
                self.check_alloc(len(left) + len(right), line)
                return left + right
            if isinstance(left, list) and isinstance(right, list):
                self.check_alloc(len(left) + len(right), line)
                return left + right
            raise _fault("type", f"cannot add {_type_name(left)} and {_type_name(right)}", line)
        if isinstance(op, ast.Sub):
            self.require_ints(left, right, "-", line)
            return left - right
        if isinstance(op, ast.Mult):
            if self.is_int(left) and self.is_int(right):
                return left * right
            seq, n = (left, right) if isinstance(right, int) else (right, left)
            if isinstance(seq, (str, list)) and self.is_int(n):
                self.check_alloc(len(seq) * max(n, 0), line)
                return seq * n
            raise _fault("type", f"cannot multiply {_type_name(left)} by {_type_name(right)}", line)
        if isinstance(op, ast.FloorDiv):
            self.require_ints(left, right, "//", line)
            if right == 0:
                raise _fault("value", "division by zero", line)
            return left // right
        if isinstance(op, ast.Mod):
            self.require_ints(left, right, "%", line)
            if right == 0:
                raise _fault("value", "modulo by zero", line)
            return left % right
        raise _fault("internal", "unhandled operator")  # pragma: no cover

    @staticmethod
    def is_int(v) -> bool:
        return isinstance(v, int) and not isinstance(v, bool)

    def require_ints(self, left, right, op: str, line: int) -> None:
        if not (self.is_int(left) and self.is_int(right)):
            raise _fault("type", f"{op} needs integers, got {_type_name(left)} and {_type_name(right)}", line)

    def check_alloc(self, size: int, line: int) -> None:
        if size > ALLOCATION_LIMIT:
            raise _fault("allocation", f"allocation of {size} elements exceeds the limit", line)

    def compare(self, node: ast.Compare, frame: _Frame):
        left = self.eval(node.left, frame)
        for op, comparator in zip(node.ops, node.comparators):
            right = self.eval(comparator, frame)
            if isinstance(op, (ast.Eq, ast.Is)):
                ok = left == right
            elif isinstance(op, (ast.NotEq, ast.IsNot)):
                ok = left != right
            elif isinstance(op, ast.In):
                ok = _bi_contains(right, left)
            elif isinstance(op, ast.NotIn):
                ok = not _bi_contains(right, left)
            else:
                try:
                    if isinstance(op, ast.Lt):
                        ok = _ordered(left, right) < 0
                    elif isinstance(op, ast.LtE):
                        ok = _ordered(left, right) <= 0
                    elif isinstance(op, ast.Gt):
                        ok = _ordered(left, right) > 0
                    else:
                        ok = _ordered(left, right) >= 0
                except TypeError:
                    raise _fault(
                        "type",
                        f"cannot order {_type_name(left)} and {_type_name(right)}",
                        node.lineno,
                    ) from None
            if not ok:
                return False
            left = right
        return True

    def subscript(self, node: ast.Subscript, frame: _Frame):
        container = self.eval(node.value, frame)
        key = self.eval(node.slice, frame)
        if isinstance(container, dict):
            if key not in container:
                raise _fault("missing_key", f"key {key!r} not in map (use .get())", node.lineno)
            return container[key]
        if isinstance(container, (list, str)):
            idx = self.int_index(key, node.lineno)
            try:
                return container[idx]
            except IndexError:
                raise _fault("index", f"index {idx} out of range", node.lineno) from None
        raise _fault("type", f"cannot index {_type_name(container)}", node.lineno)

    def int_index(self, key, line: int) -> int:
        if not self.is_int(key):
            raise _fault("type", f"index must be an integer, got {_type_name(key)}", line)
        return key

    def truthy(self, value) -> bool:
        if value is None:
            return False
        if isinstance(value, (bool, int, str, list, dict)):
            return bool(value)
        return True  # pragma: no cover

    # -- calls ---------------------------------------------------------------

    def call(self, node: ast.Call, frame: _Frame):
        args = [self.eval(a, frame) for a in node.args]
        func = node.func
        if isinstance(func, ast.Name):
            fn = frame.functions.get(func.id) or self.module_functions.get(func.id)
            if fn is not None:
                return self.call_function(fn, args, func.lineno)
            impl = _BUILTIN_IMPLS.get(func.id)
            if impl is None:
                raise _fault("name", f"unknown function {func.id!r}", func.lineno)
            try:
                return impl(*args)
            except TypeError:
                raise _fault("arity", f"bad arguments to {func.id}()", func.lineno) from None
        assert isinstance(func, ast.Attribute)
        receiver = self.eval(func.value, frame)
        return self.method(receiver, func.attr, args, func.lineno)

    def method(self, receiver, name: str, args: list, line: int):
        table = {dict: _DICT_METHODS, list: _LIST_METHODS, str: _STR_METHODS}.get(type(receiver))
        if isinstance(receiver, bool) or table is None:
            raise _fault("type", f".{name}() on {_type_name(receiver)}", line)
        impl = table.get(name)
        if impl is None:
            raise _fault("type", f"{_type_name(receiver)} has no method .{name}()", line)
        try:
            return impl(receiver, *args)
        except RuntimeFault:
            raise
        except TypeError:
            raise _fault("arity", f"bad arguments to .{name}()", line) from None
        except KeyError as exc:
            raise _fault("missing_key", f"key {exc.args[0]!r} not in map", line) from None
        except ValueError as exc:
            raise _fault("value", str(exc), line) from None
        except IndexError:
            raise _fault("index", "index out of range", line) from None


def _ordered(left, right) -> int:
    key_l, key_r = _sort_key(left), _sort_key(right)
    if key_l == key_r:
        return 0
    return -1 if key_l < key_r else 1


def _to_text(value) -> str:
    if isinstance(value, str):
        return value
    if value is None:
        return "None"
    if isinstance(value, bool):
        return "True" if value else "False"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, list):
        return "[" + ", ".join(_repr_text(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k!r}: {_repr_text(v)}" for k, v in value.items()) + "}"
    return repr(value)  # pragma: no cover


def _repr_text(value) -> str:
    return repr(value) if isinstance(value, str) else _to_text(value)


def _guard_alloc_extend(xs, items):
    items = list(items) if isinstance(items, list) else None
    if items is None:
        raise _fault("type", "extend() expects a list")
    if len(xs) + len(items) > ALLOCATION_LIMIT:
        raise _fault("allocation", "list exceeds the allocation limit")
    xs.extend(items)
    return None


_DICT_METHODS = {
    "get": lambda m, k, *d: m.get(k, d[0] if d else None),
    "copy": lambda m: dict(m),
    "keys": lambda m: list(m.keys()),
    "values": lambda m: list(m.values()),
    "items": lambda m: [[k, v] for k, v in m.items()],
    "pop": lambda m, k, *d: m.pop(k, *d),
    "setdefault": lambda m, k, *d: m.setdefault(k, d[0] if d else None),
    "update": lambda m, other: m.update(other),
}

_LIST_METHODS = {
    "append": _bi_append,
    "remove": lambda xs, x: _bi_remove(xs, x),
    "pop": lambda xs, *i: xs.pop(*i),
    "insert": lambda xs, i, x: xs.insert(i, x),
    "index": lambda xs, x: xs.index(x),
    "count": lambda xs, x: xs.count(x),
    "copy": lambda xs: list(xs),
    "extend": _guard_alloc_extend,
}

_STR_METHODS = {
    "startswith": lambda s, p: s.startswith(p),
    "endswith": lambda s, p: s.endswith(p),
    "split": lambda s, *sep: s.split(*sep),
    "replace": lambda s, a, b: s.replace(a, b),
    "strip": lambda s, *chars: s.strip(*chars),
    "lower": lambda s: s.lower(),
    "upper": lambda s: s.upper(),
    "join": lambda s, xs: s.join(xs),
}


# ---------------------------------------------------------------------------
# Entry points


def run_transition(
    program: TransitionProgram,
    state: RawState,
    action: Action,
    step_budget: int = DEFAULT_STEP_BUDGET,
) -> RawState:
    """Predict the successor state; the input state is never mutated.

    Raises StepBudgetExceeded or RuntimeFault; both are model defects to
    feed back into synthesis, never process failures.
    """
    interp = _Interpreter(program, step_budget)
    result = interp.call_entry([state.to_dict(), action])
    if not isinstance(result, dict):
        raise _fault("bad_state", f"transition returned {_type_name(result)}, expected a map")
    try:
        return canonicalize(result)
    except StateError as exc:
        raise _fault("bad_state", f"transition returned an invalid state: {exc}") from None


def run_predicate(
    program: PredicateProgram,
    state: RawState,
    args: tuple[str, ...] | list[str],
    step_budget: int = DEFAULT_STEP_BUDGET,
) -> bool:
    """Evaluate a classifier; runtime faults count as False.

    Missing objects therefore never crash grounding: a classifier that
    indexes an absent key simply reports the predicate as not holding.
    Only StepBudgetExceeded escapes.
    """
    expected = program.arity
    if len(args) != expected:
        raise ValueError(f"predicate {program.name or program.entry} expects {expected} args")
    interp = _Interpreter(program, step_budget)
    try:
        result = interp.call_entry([state.to_dict(), *args])
    except RuntimeFault:
        return False
    return interp.truthy(result)
