"""Parser and printer for the STRIPS-with-typing PDDL subset.

Supported: ``:strips``, ``:typing``, negative preconditions, conjunctive
(possibly multi-literal) goals.  Anything richer (conditional effects,
numeric fluents, quantifiers, disjunction) raises UnsupportedFeature.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = [
    "ActionSchema",
    "DomainAst",
    "Literal",
    "ParseError",
    "PddlError",
    "PredicateDecl",
    "ProblemAst",
    "UnsupportedFeature",
    "parse_document",
    "parse_domain",
    "parse_problem",
    "pretty_domain",
    "pretty_problem",
    "split_forms",
]


class PddlError(Exception):
    """Base class for PDDL front-end errors."""


class ParseError(PddlError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnsupportedFeature(PddlError):
    """Construct outside the supported subset."""


@dataclass(frozen=True)
class Literal:
    predicate: str
    args: tuple[str, ...]
    positive: bool = True

    def negate(self) -> "Literal":
        return Literal(self.predicate, self.args, not self.positive)

    def __str__(self) -> str:
        inner = f"({self.predicate}{''.join(' ' + a for a in self.args)})"
        return inner if self.positive else f"(not {inner})"


@dataclass(frozen=True)
class PredicateDecl:
    name: str
    params: tuple[tuple[str, str], ...]  # (?var, type)

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass(frozen=True)
class ActionSchema:
    name: str
    params: tuple[tuple[str, str], ...]
    precondition: tuple[Literal, ...]
    effect: tuple[Literal, ...]


@dataclass(frozen=True)
class DomainAst:
    name: str
    requirements: tuple[str, ...] = ()
    types: tuple[tuple[str, str | None], ...] = (("object", None),)
    predicates: tuple[PredicateDecl, ...] = ()
    actions: tuple[ActionSchema, ...] = ()

    def predicate(self, name: str) -> PredicateDecl | None:
        for decl in self.predicates:
            if decl.name == name:
                return decl
        return None

    def type_names(self) -> set[str]:
        return {name for name, _ in self.types}

    def is_subtype(self, child: str, ancestor: str) -> bool:
        if ancestor == "object" or child == ancestor:
            return True
        parents = dict(self.types)
        seen = set()
        cur: str | None = child
        while cur is not None and cur not in seen:
            if cur == ancestor:
                return True
            seen.add(cur)
            cur = parents.get(cur)
        return False


@dataclass(frozen=True)
class ProblemAst:
    name: str
    domain: str
    objects: tuple[tuple[str, str], ...]
    init: frozenset[tuple[str, tuple[str, ...]]]
    goals: tuple[Literal, ...]
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def object_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.objects)


# ---------------------------------------------------------------------------
# Tokenizer / s-expression reader


@dataclass(frozen=True)
class _Tok:
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch in "()":
            toks.append(_Tok(ch, line, col))
            col += 1
            i += 1
            continue
        start = i
        start_col = col
        while i < n and not text[i].isspace() and text[i] not in "();":
            i += 1
            col += 1
        toks.append(_Tok(text[start:i], line, start_col))
    return toks


def _read_form(toks: list[_Tok], pos: int) -> tuple[object, int]:
    tok = toks[pos]
    if tok.text == "(":
        items: list[object] = []
        pos += 1
        while pos < len(toks) and toks[pos].text != ")":
            item, pos = _read_form(toks, pos)
            items.append(item)
        if pos >= len(toks):
            raise ParseError("unbalanced '('", tok.line, tok.col)
        return (items, tok), pos + 1
    if tok.text == ")":
        raise ParseError("unexpected ')'", tok.line, tok.col)
    return tok, pos + 1


def _read_all(text: str) -> list[tuple[list, _Tok]]:
    toks = _tokenize(text)
    forms = []
    pos = 0
    while pos < len(toks):
        form, pos = _read_form(toks, pos)
        if isinstance(form, _Tok):
            # Bare words outside any form (e.g. surrounding prose) are skipped.
            continue
        forms.append(form)
    return forms


def split_forms(text: str) -> list[str]:
    """Top-level parenthesized forms as source substrings, prose dropped."""
    toks = _tokenize(text)
    spans = []
    depth = 0
    start = None
    for tok in toks:
        if tok.text == "(":
            if depth == 0:
                start = (tok.line, tok.col)
            depth += 1
        elif tok.text == ")":
            depth -= 1
            if depth == 0 and start is not None:
                spans.append((start, (tok.line, tok.col)))
                start = None
    lines = text.splitlines()

    def offset(line: int, col: int) -> int:
        return sum(len(l) + 1 for l in lines[: line - 1]) + col - 1

    return [text[offset(*a) : offset(*b) + 1] for a, b in spans]


def _is_tok(node: object) -> bool:
    return isinstance(node, _Tok)


def _head(node: object) -> str | None:
    if isinstance(node, tuple) and node[0] and _is_tok(node[0][0]):
        return node[0][0].text.lower()
    return None


def _items(node: tuple) -> list:
    return node[0]


def _loc(node: object) -> tuple[int, int]:
    if isinstance(node, _Tok):
        return node.line, node.col
    return node[1].line, node[1].col


def _sym(node: object, what: str) -> str:
    if not _is_tok(node):
        raise ParseError(f"expected {what}", *_loc(node))
    return node.text


# ---------------------------------------------------------------------------
# Typed lists, literals, formulas


def _parse_typed_list(nodes: list, default: str = "object") -> tuple[tuple[str, str], ...]:
    out: list[tuple[str, str]] = []
    pending: list[str] = []
    i = 0
    while i < len(nodes):
        word = _sym(nodes[i], "name in typed list")
        if word == "-":
            if i + 1 >= len(nodes):
                raise ParseError("dangling '-' in typed list", *_loc(nodes[i]))
            typ = _sym(nodes[i + 1], "type name")
            out.extend((name, typ) for name in pending)
            pending = []
            i += 2
        else:
            pending.append(word)
            i += 1
    out.extend((name, default) for name in pending)
    return tuple(out)


def _parse_literal(node: object) -> Literal:
    if _is_tok(node):
        raise ParseError("expected a literal", *_loc(node))
    items = _items(node)
    if not items:
        raise ParseError("empty literal", *_loc(node))
    head = _sym(items[0], "predicate name")
    if head.lower() == "not":
        if len(items) != 2:
            raise ParseError("(not ...) takes one literal", *_loc(node))
        inner = _parse_literal(items[1])
        if not inner.positive:
            raise UnsupportedFeature("double negation is not supported")
        return inner.negate()
    args = tuple(_sym(a, "argument") for a in items[1:])
    return Literal(head, args)


_REJECTED_HEADS = {
    "forall": "universal quantification",
    "exists": "existential quantification",
    "when": "conditional effects",
    "or": "disjunction",
    "imply": "implication",
    "increase": "numeric fluents",
    "decrease": "numeric fluents",
    "assign": "numeric fluents",
}


def _parse_conjunction(node: object, what: str) -> tuple[Literal, ...]:
    """Formula as a flat conjunction of possibly-negated literals."""
    if _is_tok(node):
        raise ParseError(f"expected {what}", *_loc(node))
    items = _items(node)
    if not items:
        return ()
    head = _sym(items[0], "formula head").lower()
    if head in _REJECTED_HEADS:
        raise UnsupportedFeature(_REJECTED_HEADS[head])
    if head == "and":
        literals: list[Literal] = []
        for sub in items[1:]:
            sub_head = _head(sub)
            if sub_head in _REJECTED_HEADS:
                raise UnsupportedFeature(_REJECTED_HEADS[sub_head])
            literals.extend(_parse_conjunction(sub, what) if sub_head == "and" else [_parse_literal(sub)])
        return tuple(literals)
    return (_parse_literal(node),)


# ---------------------------------------------------------------------------
# Domain / problem


def parse_domain(text: str) -> DomainAst:
    """Parse a domain document; raises ParseError / UnsupportedFeature."""
    forms = _read_all(text)
    for form in forms:
        if _head(form) == "define":
            return _parse_domain_form(form)
    raise ParseError("no (define (domain ...)) form found", 1, 1)


def _parse_domain_form(form: tuple) -> DomainAst:
    items = _items(form)
    if len(items) < 2 or _head(items[1]) != "domain":
        raise ParseError("expected (domain NAME)", *_loc(form))
    name = _sym(_items(items[1])[1], "domain name")

    requirements: tuple[str, ...] = ()
    types: list[tuple[str, str | None]] = []
    predicates: list[PredicateDecl] = []
    actions: list[ActionSchema] = []

    for section in items[2:]:
        head = _head(section)
        body = _items(section)[1:]
        if head == ":requirements":
            requirements = tuple(_sym(t, "requirement") for t in body)
            for req in requirements:
                if req not in (":strips", ":typing", ":negative-preconditions"):
                    raise UnsupportedFeature(f"requirement {req}")
        elif head == ":types":
            for tname, parent in _parse_typed_list(body, default=""):
                types.append((tname, parent or None))
        elif head == ":predicates":
            for decl in body:
                decl_items = _items(decl)
                pname = _sym(decl_items[0], "predicate name")
                params = _parse_typed_list(decl_items[1:])
                predicates.append(PredicateDecl(pname, params))
        elif head == ":action":
            actions.append(_parse_action(section))
        elif head in (":constants", ":functions", ":derived", ":axiom"):
            raise UnsupportedFeature(f"section {head}")
        else:
            raise ParseError(f"unknown domain section {head}", *_loc(section))

    if "object" not in {t for t, _ in types}:
        types.insert(0, ("object", None))
    domain = DomainAst(name, requirements, tuple(types), tuple(predicates), tuple(actions))
    _check_domain_literals(domain)
    return domain


def _parse_action(section: tuple) -> ActionSchema:
    items = _items(section)
    name = _sym(items[1], "action name")
    params: tuple[tuple[str, str], ...] = ()
    precondition: tuple[Literal, ...] = ()
    effect: tuple[Literal, ...] = ()
    i = 2
    while i < len(items):
        key = _sym(items[i], "action keyword").lower()
        if i + 1 >= len(items):
            raise ParseError(f"missing value for {key}", *_loc(items[i]))
        value = items[i + 1]
        if key == ":parameters":
            params = _parse_typed_list(_items(value))
        elif key == ":precondition":
            precondition = _parse_conjunction(value, "precondition")
        elif key == ":effect":
            effect = _parse_conjunction(value, "effect")
        else:
            raise UnsupportedFeature(f"action field {key}")
        i += 2
    return ActionSchema(name, params, precondition, effect)


def _check_domain_literals(domain: DomainAst) -> None:
    for action in domain.actions:
        declared_vars = {v for v, _ in action.params}
        for lit in action.precondition + action.effect:
            decl = domain.predicate(lit.predicate)
            if decl is None:
                raise ParseError(f"undeclared predicate {lit.predicate!r} in action {action.name}")
            if decl.arity != len(lit.args):
                raise ParseError(
                    f"predicate {lit.predicate!r} used with {len(lit.args)} args, declared {decl.arity}"
                )
            for arg in lit.args:
                if arg.startswith("?") and arg not in declared_vars:
                    raise ParseError(f"unbound variable {arg} in action {action.name}")


def parse_problem(text: str) -> ProblemAst:
    """Parse a problem document.

    Negative ``:init`` literals are dropped with a recorded warning: under
    the closed-world assumption they are redundant, but generated files
    routinely include them.
    """
    forms = _read_all(text)
    for form in forms:
        if _head(form) == "define":
            return _parse_problem_form(form)
    raise ParseError("no (define (problem ...)) form found", 1, 1)


def _parse_problem_form(form: tuple) -> ProblemAst:
    items = _items(form)
    if len(items) < 2 or _head(items[1]) != "problem":
        raise ParseError("expected (problem NAME)", *_loc(form))
    name = _sym(_items(items[1])[1], "problem name")

    domain = ""
    objects: tuple[tuple[str, str], ...] = ()
    init: set[tuple[str, tuple[str, ...]]] = set()
    goals: tuple[Literal, ...] = ()
    warnings: list[str] = []

    for section in items[2:]:
        head = _head(section)
        body = _items(section)[1:]
        if head == ":domain":
            domain = _sym(body[0], "domain reference")
        elif head == ":objects":
            objects = _parse_typed_list(body)
        elif head == ":init":
            for node in body:
                lit = _parse_literal(node)
                if not lit.positive:
                    warnings.append(f"dropped negative init literal {lit}")
                    continue
                init.add((lit.predicate, lit.args))
        elif head == ":goal":
            if len(body) != 1:
                raise ParseError("(:goal ...) takes one formula", *_loc(section))
            goals = _parse_conjunction(body[0], "goal")
        elif head == ":metric":
            raise UnsupportedFeature("metrics")
        else:
            raise ParseError(f"unknown problem section {head}", *_loc(section))

    if not goals:
        raise ParseError("problem has no goals")
    declared = {n for n, _ in objects}
    for pred, args in sorted(init):
        for arg in args:
            if arg not in declared:
                raise ParseError(f"init references undeclared object {arg!r}")
    for lit in goals:
        for arg in lit.args:
            if arg not in declared:
                raise ParseError(f"goal references undeclared object {arg!r}")
    return ProblemAst(name, domain, objects, frozenset(init), goals, tuple(warnings))


def parse_document(text: str) -> tuple[list[DomainAst], list[ProblemAst]]:
    """Parse every domain and problem in a mixed document."""
    domains, problems = [], []
    for form in _read_all(text):
        items = _items(form)
        if _head(form) != "define" or len(items) < 2:
            continue
        kind = _head(items[1])
        if kind == "domain":
            domains.append(_parse_domain_form(form))
        elif kind == "problem":
            problems.append(_parse_problem_form(form))
    return domains, problems


# ---------------------------------------------------------------------------
# Printing


def _fmt_typed(params: tuple[tuple[str, str], ...]) -> str:
    return " ".join(f"{v} - {t}" for v, t in params)


def _fmt_formula(literals: tuple[Literal, ...]) -> str:
    if not literals:
        return "(and)"
    if len(literals) == 1:
        return str(literals[0])
    return "(and " + " ".join(str(l) for l in literals) + ")"


def pretty_domain(domain: DomainAst) -> str:
    lines = [f"(define (domain {domain.name})"]
    if domain.requirements:
        lines.append(f"  (:requirements {' '.join(domain.requirements)})")
    lines.append("  (:types")
    for tname, parent in domain.types:
        lines.append(f"    {tname}" + (f" - {parent}" if parent else ""))
    lines.append("  )")
    if domain.predicates:
        lines.append("  (:predicates")
        for decl in domain.predicates:
            lines.append(f"    ({decl.name} {_fmt_typed(decl.params)})".replace(" )", ")"))
        lines.append("  )")
    for action in domain.actions:
        lines.append(f"  (:action {action.name}")
        lines.append(f"    :parameters ({_fmt_typed(action.params)})")
        lines.append(f"    :precondition {_fmt_formula(action.precondition)}")
        lines.append(f"    :effect {_fmt_formula(action.effect)}")
        lines.append("  )")
    lines.append(")")
    return "\n".join(lines) + "\n"


def pretty_problem(problem: ProblemAst) -> str:
    lines = [f"(define (problem {problem.name})", f"  (:domain {problem.domain})"]
    lines.append("  (:objects")
    by_type: dict[str, list[str]] = {}
    for name, typ in problem.objects:
        by_type.setdefault(typ, []).append(name)
    for typ, names in by_type.items():
        lines.append(f"    {' '.join(names)} - {typ}")
    lines.append("  )")
    lines.append("  (:init")
    for pred, args in sorted(problem.init):
        lines.append(f"    ({pred}{''.join(' ' + a for a in args)})")
    lines.append("  )")
    lines.append(f"  (:goal {_fmt_formula(problem.goals)})")
    lines.append(")")
    return "\n".join(lines) + "\n"
