import itertools
from collections import deque

import pytest

from tbrl.assets import read_asset
from tbrl.pddl import (
    GroundedOperator,
    Literal,
    ParseError,
    ResourceLimit,
    Unsolvable,
    UnsupportedFeature,
    ground,
    parse_document,
    parse_domain,
    parse_problem,
    plan,
    pretty_domain,
    pretty_problem,
    simulate,
    split_forms,
    validate,
)
from tbrl.state import canonicalize

FEW_SHOT_FILES = ["few_shot_1.pddl", "few_shot_2.pddl", "few_shot_3.pddl"]


def load_pair(name):
    text = read_asset("pddl", name)
    domains, problems = parse_document(text)
    return domains[0], problems[0]


# --- parsing -----------------------------------------------------------------


def test_parse_toy_domain():
    domain, _ = load_pair("few_shot_1.pddl")
    assert domain.name == "toy-domain"
    assert [t for t, _ in domain.types] == ["object"]
    assert [p.name for p in domain.predicates] == ["ontop"]
    assert domain.predicates[0].arity == 2
    (action,) = domain.actions
    assert action.name == "placeontopof"
    assert action.precondition == (Literal("ontop", ("?obj1", "?obj2"), positive=False),)
    assert action.effect == (Literal("ontop", ("?obj1", "?obj2")),)


def test_parse_movement_domain():
    text = read_asset("pddl", "movement_domain.pddl")
    domain = parse_domain(text)
    (action,) = domain.actions
    assert action.name == "moveontop"
    assert action.effect == (Literal("ontop", ("?obj1", "?obj2")),)


def test_parse_babyai_learned_domain():
    domain = parse_domain(read_asset("pddl", "babyai_learned.pddl"))
    assert {a.name for a in domain.actions} == {"pickup", "unlock"}
    assert {p.name for p in domain.predicates} == {"holding", "unlocked"}


def test_parse_toy_problem():
    _, problem = load_pair("few_shot_1.pddl")
    assert problem.object_names() == ("table", "mug")
    assert problem.goals == (Literal("ontop", ("mug", "table")),)


def test_negative_init_dropped_with_warning():
    _, problem = load_pair("few_shot_2.pddl")
    assert problem.init == frozenset()
    assert any("negative init" in w for w in problem.warnings)


def test_problem_with_two_goals():
    text = """
    (define (problem two) (:domain movement)
      (:objects avatar goal box hole - object)
      (:init)
      (:goal (and (ontop avatar goal) (ontop box hole))))
    """
    problem = parse_problem(text)
    assert len(problem.goals) == 2


def test_parse_error_has_location():
    with pytest.raises(ParseError) as err:
        parse_domain("(define (domain broken)\n  (:predicates (p ?x - object))\n  (:action")
    assert err.value.line >= 1


def test_unsupported_features_rejected():
    with pytest.raises(UnsupportedFeature):
        parse_domain(
            """(define (domain bad) (:predicates (p ?x - object))
               (:action a :parameters (?x - object)
                :precondition (p ?x)
                :effect (when (p ?x) (p ?x))))"""
        )
    with pytest.raises(UnsupportedFeature):
        parse_domain("(define (domain bad) (:functions (cost)))")


def test_undeclared_predicate_rejected():
    with pytest.raises(ParseError):
        parse_domain(
            """(define (domain bad) (:predicates (p ?x - object))
               (:action a :parameters (?x - object) :precondition (q ?x) :effect (p ?x)))"""
        )


def test_split_forms_skips_prose():
    text = read_asset("pddl", "few_shot_3.pddl")
    forms = split_forms(text)
    assert len(forms) == 2
    assert forms[0].startswith("(define (domain")


@pytest.mark.parametrize("name", FEW_SHOT_FILES + ["movement_domain.pddl", "babyai_learned.pddl"])
def test_pretty_print_round_trip(name):
    text = read_asset("pddl", name)
    domains, problems = parse_document(text)
    for domain in domains:
        assert parse_domain(pretty_domain(domain)) == domain
    for problem in problems:
        reparsed = parse_problem(pretty_problem(problem))
        assert (reparsed.objects, reparsed.init, reparsed.goals) == (
            problem.objects,
            problem.init,
            problem.goals,
        )


# --- validation --------------------------------------------------------------


def test_validate_clean_pair():
    domain, problem = load_pair("few_shot_1.pddl")
    assert validate(domain, problem).ok


def test_validate_flags_hyphen():
    domain = parse_domain(
        """(define (domain bad) (:predicates (avatar-at ?x - object))
           (:action go :parameters (?x - object) :effect (avatar-at ?x)))"""
    )
    report = validate(domain)
    assert any("hyphen" in f.message for f in report.errors)


def test_validate_flags_uppercase():
    domain = parse_domain(
        """(define (domain bad) (:predicates (isLeftOf ?x - object ?y - object)))"""
    )
    assert not validate(domain).ok


def test_validate_spatial_names_warn_only():
    domain = parse_domain(
        """(define (domain odd) (:predicates (moveto ?x - object)))"""
    )
    report = validate(domain)
    assert report.ok
    assert any(f.code == "spatial" for f in report.warnings)
    # 'ontop' must not be flagged even though it contains "to".
    clean, _ = load_pair("few_shot_1.pddl")
    assert not any(f.code == "spatial" for f in validate(clean).warnings)


def test_validate_config_prefix_stripping():
    domain, problem = load_pair("few_shot_2.pddl")
    state = canonicalize(
        {"agent": [[3, 4]], "apple": [[5, 4]], "unopened_black_jar": [[0, 1]]}
    )
    report = validate(domain, problem, raw_state=state)
    assert report.ok


def test_validate_unknown_object():
    domain, problem = load_pair("few_shot_1.pddl")
    state = canonicalize({"table": [[3, 4]]})  # no mug anywhere
    report = validate(domain, problem, raw_state=state)
    assert any(f.code == "unknown_object" for f in report.errors)


# --- grounding ---------------------------------------------------------------


def test_ground_toy_domain_self_pairs():
    domain, problem = load_pair("few_shot_1.pddl")
    ops = ground(domain, problem)
    assert len(ops) == 4  # 2 objects, 2 parameters, self-pairs included
    labels = [op.label() for op in ops]
    assert labels == sorted(labels)


def test_ground_empty_domain():
    domain = parse_domain("(define (domain empty) (:predicates (p ?x - object)))")
    problem = parse_problem(
        "(define (problem e) (:domain empty) (:objects a b - object) (:init (p a)) (:goal (p a)))"
    )
    assert ground(domain, problem) == ()


def test_ground_babyai_arity_counts():
    domain = parse_domain(read_asset("pddl", "babyai_learned.pddl"))
    problem = parse_problem(
        """(define (problem b) (:domain babyai)
           (:objects red_agent blue_key blue_door - object)
           (:init) (:goal (unlocked blue_door)))"""
    )
    ops = ground(domain, problem)
    assert sum(1 for op in ops if op.name == "pickup") == 9
    assert sum(1 for op in ops if op.name == "unlock") == 27


def test_ground_respects_types():
    domain = parse_domain(read_asset("pddl", "babyai_domain.pddl"))
    problem = parse_problem(
        """(define (problem b) (:domain babyai)
           (:objects red_agent - agent blue_key - key blue_door - door)
           (:init) (:goal (unlocked blue_door)))"""
    )
    ops = ground(domain, problem)
    assert [op.label() for op in ops] == [
        "pickup(red_agent, blue_key)",
        "unlock(red_agent, blue_door, blue_key)",
    ]


# --- planning ----------------------------------------------------------------


def test_plan_toy_problem_single_step():
    domain, problem = load_pair("few_shot_1.pddl")
    result = plan(domain, problem)
    assert [op.label() for op in result] == ["placeontopof(mug, table)"]


def test_plan_goal_already_satisfied():
    domain, _ = load_pair("few_shot_1.pddl")
    problem = parse_problem(
        """(define (problem done) (:domain toy-domain)
           (:objects table mug - object)
           (:init (ontop mug table)) (:goal (ontop mug table)))"""
    )
    assert plan(domain, problem) == ()


def test_plan_typed_babyai_unlock_two_steps():
    domain = parse_domain(read_asset("pddl", "babyai_domain.pddl"))
    problem = parse_problem(
        """(define (problem b) (:domain babyai)
           (:objects red_agent - agent blue_key - key blue_door - door)
           (:init) (:goal (unlocked blue_door)))"""
    )
    result = plan(domain, problem)
    assert [op.label() for op in result] == [
        "pickup(red_agent, blue_key)",
        "unlock(red_agent, blue_door, blue_key)",
    ]


def test_plan_unsolvable():
    domain = parse_domain(
        """(define (domain stuck) (:predicates (p ?x - object) (q ?x - object))
           (:action a :parameters (?x - object) :precondition (q ?x) :effect (p ?x)))"""
    )
    problem = parse_problem(
        "(define (problem s) (:domain stuck) (:objects o - object) (:init) (:goal (p o)))"
    )
    with pytest.raises(Unsolvable):
        plan(domain, problem)


def test_plan_node_budget():
    domain, problem = load_pair("few_shot_1.pddl")
    hard = parse_problem(
        """(define (problem h) (:domain toy-domain)
           (:objects a b c d e - object)
           (:init) (:goal (and (ontop a b) (ontop b c) (ontop c d) (ontop d e))))"""
    )
    with pytest.raises(ResourceLimit):
        plan(domain, hard, max_nodes=2)


def test_plan_deterministic():
    domain = parse_domain(read_asset("pddl", "babyai_learned.pddl"))
    problem = parse_problem(
        """(define (problem b) (:domain babyai)
           (:objects red_agent blue_key blue_door - object)
           (:init) (:goal (unlocked blue_door)))"""
    )
    first = plan(domain, problem)
    second = plan(domain, problem)
    assert [op.label() for op in first] == [op.label() for op in second]
    assert len(first) == 2  # pickup something, then unlock with it


# --- oracle: independent brute-force shortest-plan search --------------------


def brute_force_plan_length(domain, problem, cap=50_000):
    """Breadth-first search written independently of the planner module."""
    objects = [n for n, _ in problem.objects]
    ground_ops = []
    for action in domain.actions:
        for combo in itertools.product(objects, repeat=len(action.params)):
            binding = dict(zip((v for v, _ in action.params), combo))
            ok = all(
                domain.is_subtype(dict(problem.objects)[obj], typ)
                for (_, typ), obj in zip(action.params, combo)
            )
            if not ok:
                continue
            pre_pos = {
                (l.predicate, tuple(binding.get(a, a) for a in l.args))
                for l in action.precondition
                if l.positive
            }
            pre_neg = {
                (l.predicate, tuple(binding.get(a, a) for a in l.args))
                for l in action.precondition
                if not l.positive
            }
            adds = {
                (l.predicate, tuple(binding.get(a, a) for a in l.args))
                for l in action.effect
                if l.positive
            }
            dels = {
                (l.predicate, tuple(binding.get(a, a) for a in l.args))
                for l in action.effect
                if not l.positive
            }
            ground_ops.append((pre_pos, pre_neg, adds, dels))

    def satisfied(state):
        return all(
            ((l.predicate, l.args) in state) == l.positive for l in problem.goals
        )

    start = frozenset(problem.init)
    if satisfied(start):
        return 0
    seen = {start}
    queue = deque([(start, 0)])
    while queue:
        state, depth = queue.popleft()
        if len(seen) > cap:
            raise RuntimeError("oracle cap exceeded")
        for pre_pos, pre_neg, adds, dels in ground_ops:
            if not (pre_pos <= state) or (pre_neg & state):
                continue
            succ = frozenset((state - dels) | adds)
            if succ in seen:
                continue
            seen.add(succ)
            if satisfied(succ):
                return depth + 1
            queue.append((succ, depth + 1))
    return None


def test_planner_matches_oracle_on_fixture_pairs():
    for name in FEW_SHOT_FILES:
        domain, problem = load_pair(name)
        expected = brute_force_plan_length(domain, problem)
        result = plan(domain, problem)
        assert len(result) == expected == 1
        final = simulate(frozenset(problem.init), result)
        assert all((l.predicate, l.args) in final for l in problem.goals if l.positive)
