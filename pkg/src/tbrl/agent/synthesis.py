"""LLM-backed synthesis: abstractions, world models, classifiers, revision.

Every operation renders a prompt template, extracts fenced code from the
response, checks it (parse, validate, replay-consistency), and retries
with the failure appended to the prompt, up to the repair budget.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from ..envs import EnvironmentSpec
from ..llm import (
    ChatClient,
    CompletionRequest,
    extract_code_blocks,
    few_shot_pddl_examples,
    load_template,
)
from ..pddl import (
    DomainAst,
    PddlError,
    ProblemAst,
    parse_document,
    pretty_domain,
    pretty_problem,
    validate,
)
from ..state import RawState, Transition, diff, serialize
from ..wmdsl import (
    PredicateProgram,
    TransitionProgram,
    WmdslError,
    builtin_catalog_text,
    parse_program,
    run_predicate,
    run_transition,
)
from .errors import SynthesisExhausted
from .library import AbstractionLibrary

__all__ = [
    "check_model_against",
    "format_transitions",
    "revise_world_model",
    "synthesize_abstractions",
    "synthesize_classifiers",
    "synthesize_world_model",
]

logger = logging.getLogger(__name__)

_REPAIR_SUFFIX = (
    "\n\nYOUR PREVIOUS RESPONSE COULD NOT BE USED:\n{error}\n"
    "Please return a corrected response in the same format."
)


def format_transitions(transitions: list[Transition]) -> str:
    """Deterministic text rendering of transitions for prompts."""
    parts = []
    for i, t in enumerate(transitions):
        parts.append(
            f"transition {i}:\nstate:\n{serialize(t.before)}action: {t.action}\n"
            f"result: {t.delta().describe()}\n"
        )
    return "\n".join(parts) if parts else "(none)\n"


def _attempts(client: ChatClient, prompt: str, purpose: str, level: str, budget: int):
    """Yield (attempt_index, response_text); callers report errors back."""
    error: str | None = None
    for attempt in range(budget + 1):
        content = prompt if error is None else prompt + _REPAIR_SUFFIX.format(error=error)
        exchange = client.complete(CompletionRequest.user(content), purpose=purpose, level=level)
        error = yield attempt, exchange.response_text
        if error is None:
            return
        logger.info("%s attempt %d rejected: %s", purpose, attempt, error)


def _run_repair_loop(gen, check):
    """Drive an _attempts generator with a checker returning (ok, value|error)."""
    try:
        attempt, response = next(gen)
    except StopIteration:  # pragma: no cover - budget >= 0 always yields once
        raise SynthesisExhausted("no attempts allowed")
    while True:
        ok, value = check(response)
        if ok:
            try:
                gen.send(None)
            except StopIteration:
                pass
            return value
        try:
            attempt, response = gen.send(value)
        except StopIteration:
            raise SynthesisExhausted(f"repair budget spent; last error: {value}") from None


def synthesize_abstractions(
    spec: EnvironmentSpec,
    s0: RawState,
    library: AbstractionLibrary,
    client: ChatClient,
    repair_budget: int = 3,
) -> tuple[DomainAst, ProblemAst]:
    """Full domain+problem synthesis, or problem-only when the library
    already holds transferable operators (the domain is reused verbatim
    and costs zero domain-synthesis tokens)."""
    if library.domain is None:
        return _synthesize_full(spec, s0, library, client, repair_budget)
    problem = synthesize_problem(spec, s0, library.domain, client, repair_budget)
    return library.domain, problem


def _synthesize_full(spec, s0, library, client, budget):
    template = load_template("generate_abstractions")
    prompt = template.render(
        domain_description=spec.domain_description,
        few_shot_pddl_examples=few_shot_pddl_examples(),
        raw_state=serialize(s0),
        current_domain="" if library.domain is None else pretty_domain(library.domain),
    )
    gen = _attempts(client, prompt, "abstraction", spec.name, budget)

    def check(response: str):
        blocks = extract_code_blocks(response, "pddl")
        if not blocks:
            return False, "no ```pddl``` code block found"
        try:
            domains, problems = parse_document("\n".join(blocks))
        except PddlError as exc:
            return False, f"PDDL parse error: {exc}"
        if not domains or not problems:
            return False, "response must contain one domain and one problem"
        report = validate(domains[0], problems[0], raw_state=s0)
        if not report.ok:
            return False, f"validation failed: {report.summary()}"
        return True, (domains[0], problems[0])

    return _run_repair_loop(gen, check)


def synthesize_problem(
    spec: EnvironmentSpec,
    s0: RawState,
    domain: DomainAst,
    client: ChatClient,
    repair_budget: int = 3,
) -> ProblemAst:
    template = load_template("transfer_problem")
    prompt = template.render(
        few_shot_pddl_examples=few_shot_pddl_examples(),
        domain_file=pretty_domain(domain),
        raw_state=serialize(s0),
        mission=spec.win.text(),
        domain_description=spec.domain_description,
    )
    gen = _attempts(client, prompt, "problem", spec.name, repair_budget)

    def check(response: str):
        blocks = extract_code_blocks(response, "pddl")
        if not blocks:
            return False, "no ```pddl``` code block found"
        try:
            _, problems = parse_document("\n".join(blocks))
        except PddlError as exc:
            return False, f"PDDL parse error: {exc}"
        if not problems:
            return False, "response must contain a problem file"
        report = validate(domain, problems[0], raw_state=s0)
        if not report.ok:
            return False, f"validation failed: {report.summary()}"
        return True, problems[0]

    return _run_repair_loop(gen, check)


def check_model_against(
    model: TransitionProgram, transitions: list[Transition], step_budget: int
) -> str | None:
    """First inconsistency between model predictions and transitions, or None."""
    for i, t in enumerate(transitions):
        try:
            predicted = run_transition(model, t.before, t.action, step_budget=step_budget)
        except WmdslError as exc:
            return f"transition {i} (action {t.action!r}): model fault: {exc}"
        if predicted != t.after:
            return (
                f"transition {i} (action {t.action!r}): predicted "
                f"{diff(t.before, predicted).describe()}, observed {t.delta().describe()}"
            )
    return None


def synthesize_world_model(
    spec: EnvironmentSpec,
    s0: RawState,
    r_random: list[Transition],
    client: ChatClient,
    repair_budget: int = 3,
    step_budget: int = 100_000,
) -> TransitionProgram:
    """Synthesize a transition program that reproduces every exploration
    transition (the acceptance gate)."""
    if not r_random:
        raise ValueError("world-model synthesis needs at least one exploration transition")
    template = load_template("generate_world_model")
    prompt = template.render(
        domain_description=spec.domain_description,
        current_state=serialize(s0),
        actions_set=", ".join(spec.actions),
        num_random_actions=str(len(r_random)),
        errors_from_world_model=format_transitions(r_random),
        utils=builtin_catalog_text(),
    )
    gen = _attempts(client, prompt, "world_model", spec.name, repair_budget)

    def check(response: str):
        blocks = extract_code_blocks(response, "wmdsl")
        if not blocks:
            return False, "no ```wmdsl``` code block found"
        try:
            model = parse_program(blocks[0], "transition")
        except WmdslError as exc:
            return False, f"program rejected: {exc}"
        problem = check_model_against(model, r_random, step_budget)
        if problem is not None:
            return False, f"model does not reproduce the replay buffer: {problem}"
        return True, model

    return _run_repair_loop(gen, check)


@dataclass
class ClassifierSynthesis:
    classifiers: dict[str, PredicateProgram]
    ungrounded: set[str]


def synthesize_classifiers(
    spec: EnvironmentSpec,
    s0: RawState,
    domain: DomainAst,
    problem: ProblemAst,
    world_model_source: str,
    client: ChatClient,
    existing: dict[str, PredicateProgram],
    repair_budget: int = 3,
) -> ClassifierSynthesis:
    """One classifier per domain predicate not already grounded.

    Returned programs are arity-checked and probed with absent objects
    (they must answer cleanly, never fault).  Predicates still missing
    after the budget are reported as ungrounded rather than fatal.
    """
    needed = {p.name: p.arity for p in domain.predicates if p.name not in existing}
    if not needed:
        return ClassifierSynthesis({}, set())
    template = load_template("generate_classifiers")
    prompt = template.render(
        domain_file=pretty_domain(domain),
        problem_file=pretty_problem(problem),
        raw_state=serialize(s0),
        world_model=world_model_source,
        game_description=spec.domain_description,
    )
    gen = _attempts(client, prompt, "classifier", spec.name, repair_budget)

    def check(response: str):
        blocks = extract_code_blocks(response, "wmdsl")
        if not blocks:
            return False, "no ```wmdsl``` code block found"
        found: dict[str, PredicateProgram] = {}
        for block in blocks:
            name = _predicate_name(block)
            if name is None:
                return False, "each block must start with `# predicate: NAME`"
            if name not in needed:
                continue
            try:
                program = parse_program(block, "predicate", name=name)
            except WmdslError as exc:
                return False, f"classifier {name}: {exc}"
            if program.arity != needed[name]:
                return False, (
                    f"classifier {name} takes {program.arity} arguments, "
                    f"declared arity is {needed[name]}"
                )
            probe_args = [f"object_that_does_not_exist_{i}" for i in range(program.arity)]
            try:
                run_predicate(program, s0, probe_args)
            except WmdslError as exc:
                return False, f"classifier {name} fails the missing-object probe: {exc}"
            found[name] = program
        missing = set(needed) - set(found)
        if missing:
            return False, f"no classifier provided for: {', '.join(sorted(missing))}"
        return True, found

    try:
        found = _run_repair_loop(gen, check)
    except SynthesisExhausted:
        logger.warning("classifier synthesis exhausted; some predicates stay ungrounded")
        return ClassifierSynthesis({}, set(needed))
    return ClassifierSynthesis(found, set())


def _predicate_name(block: str) -> str | None:
    for line in block.splitlines():
        line = line.strip()
        if line.startswith("# predicate:"):
            return line.split(":", 1)[1].strip()
        if line and not line.startswith("#"):
            break
    return None


def revise_world_model(
    spec: EnvironmentSpec,
    model: TransitionProgram,
    mismatches: list,
    ground_truth: list[Transition],
    client: ChatClient,
    revision_budget: int = 5,
    step_budget: int = 100_000,
) -> TransitionProgram:
    """Model revision from prediction errors; accepted only when the new
    program reproduces every observed transition."""
    if not mismatches:
        raise ValueError("revision requires at least one predicted/observed mismatch")
    lines = []
    for m in mismatches:
        lines.append(
            f"mismatch at step {m.index}:\nstate:\n{serialize(m.observed.before)}"
            f"action: {m.observed.action}\n"
            f"predicted: {m.predicted.delta().describe()}\n"
            f"observed: {m.observed.delta().describe()}\n"
        )
    template = load_template("revise_world_model")
    prompt = template.render(
        domain_description=spec.domain_description,
        current_model=model.source,
        mismatches="\n".join(lines),
        observed_transitions=format_transitions(ground_truth[-20:]),
        utils=builtin_catalog_text(),
    )
    gen = _attempts(client, prompt, "revision", spec.name, revision_budget)

    def check(response: str):
        blocks = extract_code_blocks(response, "wmdsl")
        if not blocks:
            return False, "no ```wmdsl``` code block found"
        try:
            revised = parse_program(blocks[0], "transition")
        except WmdslError as exc:
            return False, f"program rejected: {exc}"
        problem = check_model_against(revised, ground_truth, step_budget)
        if problem is not None:
            return False, f"revised model still wrong: {problem}"
        return True, revised

    return _run_repair_loop(gen, check)
