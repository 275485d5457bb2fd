"""Property suites over generated programs."""

import itertools

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from pardlp.analysis import analyze, check_safety
from pardlp.core import AND, OR, Atom, Constant, GroundPair, Literal
from pardlp.corpus import random_program
from pardlp.engine import (
    eval_parametric,
    gl_reduct,
    is_closed,
    is_minimal_closed,
    is_model,
    oracle_answer_sets,
    solve,
)
from pardlp.frontend import parse_program, parse_rule, render_rule
from pardlp.grounder import ground_program, instantiate

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])

names = st.sampled_from(["p", "q", "r", "s"])
variables = st.sampled_from(["X", "Y", "Z"])
terms = st.one_of(variables, st.integers(0, 3).map(str), st.sampled_from(["a", "b"]))


@st.composite
def atoms(draw, arity=None):
    name = draw(names)
    n = {"p": 1, "q": 2, "r": 0, "s": 1}[name] if arity is None else arity
    args = [draw(terms) for _ in range(n)]
    return f"{name}({','.join(args)})" if args else name


@st.composite
def literals(draw):
    return ("not " if draw(st.booleans()) else "") + draw(atoms())


@st.composite
def rule_texts(draw):
    head = [draw(atoms()) for _ in range(draw(st.integers(0, 2)))]
    if draw(st.booleans()):
        head.append(f"#or{{{draw(atoms())} : {draw(atoms())}}}")
    body = [draw(literals()) for _ in range(draw(st.integers(0 if head else 1, 3)))]
    if draw(st.booleans()):
        body.append(f"#and{{{draw(literals())} : {draw(atoms())}, {draw(literals())}}}")
    if draw(st.booleans()):
        body.append(f"{draw(variables)} {draw(st.sampled_from(['<', '!=', '>=']))} {draw(terms)}")
    h = " v ".join(head)
    if not body:
        return f"{h}."
    return f"{h} :- {', '.join(body)}." if h else f":- {', '.join(body)}."


@SETTINGS
@given(rule_texts())
def test_render_parse_round_trip(text):
    rule = parse_rule(text)
    assert parse_rule(render_rule(rule)) == rule


@SETTINGS
@given(rule_texts(), atoms())
def test_safety_monotone_under_positive_literals(text, extra):
    rule = parse_rule(text)
    if check_safety(rule):
        return
    widened = parse_rule(text[:-1] + (", " if rule.body else " :- ") + extra + ".")
    assert check_safety(widened) == []


def _ok_program(seed):
    prog = parse_program(random_program(seed))
    assert analyze(prog).ok
    return prog


@SETTINGS
@given(st.integers(0, 10**6))
def test_solver_agrees_with_direct_semantics(seed):
    prog = _ok_program(seed)
    assert solve(ground_program(prog)).answer_sets == oracle_answer_sets(instantiate(prog)).answer_sets


@SETTINGS
@given(st.integers(0, 10**6))
def test_answer_sets_are_minimal_models(seed):
    prog = _ok_program(seed)
    ground = instantiate(prog)
    for a in solve(ground_program(prog)).answer_sets:
        assert is_model(ground, a)
        red = gl_reduct(ground, a)
        assert is_closed(a, red)
        assert is_minimal_closed(a, red)


@SETTINGS
@given(st.integers(0, 10**6))
def test_answer_sets_pairwise_incomparable(seed):
    sets = solve(ground_program(_ok_program(seed))).answer_sets
    for a, b in itertools.combinations(sets, 2):
        assert not (a <= b or b <= a)


@SETTINGS
@given(st.integers(0, 10**6))
def test_pruning_is_answer_set_preserving(seed):
    prog = _ok_program(seed)
    assert solve(ground_program(prog, prune=True)).answer_sets == solve(ground_program(prog, prune=False)).answer_sets


@SETTINGS
@given(st.integers(0, 10**6), st.integers(2, 4), st.integers(0, 3))
def test_threads_do_not_change_output(seed, threads, split):
    ground = ground_program(_ok_program(seed))
    assert solve(ground, threads=threads, split_depth=split).answer_sets == solve(ground).answer_sets


@given(st.lists(st.integers(1, 5), max_size=4))
def test_empty_or_is_false_and_empty_and_is_true(present):
    interp = {Atom("p", (Constant(i),)) for i in present}
    pairs = [GroundPair(Literal(Atom("b", (Constant(1),))), (Literal(Atom("a", (Constant(1),))),))]
    assert eval_parametric(OR, pairs, interp) is False
    assert eval_parametric(AND, pairs, interp) is True
    assert eval_parametric(OR, [], interp) is False
    assert eval_parametric(AND, [], interp) is True


@given(st.integers(1, 4))
def test_empty_or_head_acts_as_constraint(n):
    facts = " ".join(f"f({i})." for i in range(1, n + 1))
    incoherent = parse_program(facts + "\n#or{b(X) : a(X)} :- f(1).\n")
    assert not solve(ground_program(incoherent)).coherent
    assert not oracle_answer_sets(instantiate(incoherent)).coherent
    vacuous = parse_program(facts + "\nok :- f(1), #and{b(X) : a(X)}.\n")
    (answer,) = solve(ground_program(vacuous)).answer_sets
    assert Atom("ok") in answer
