import pytest

from pardlp.core import OR, Atom, Constant, ParametricLiteral
from pardlp.corpus import ENCODINGS, encoding
from pardlp.frontend import ParseError, parse_program, parse_rule, render_program, render_rule, tokenize


def kinds(text):
    return [t.kind for t in tokenize(text)]


def test_tokenize_atom():
    assert kinds("p(1).") == ["ident", "lparen", "int", "rparen", "dot"]


def test_tokenize_disjunction_and_negation():
    assert kinds("a v b :- not c.") == ["ident", "kw_v", "ident", "implies", "kw_not", "ident", "dot"]


def test_comment_only():
    assert kinds("% comment\n") == []


@pytest.mark.parametrize("op", ["=", "!=", "<", "<=", ">", ">="])
def test_comparison_tokens(op):
    toks = tokenize(f"X {op} Y")
    assert [t.kind for t in toks] == ["var", "cmp", "var"]
    assert toks[1].text == op


def test_diamond_is_inequality():
    assert tokenize("X <> Y")[1].text == "!="


def test_lex_error_has_span():
    with pytest.raises(ParseError) as exc:
        parse_program("a.\nb :- c & d.")
    (diag,) = exc.value.diagnostics
    assert diag.code == "E-LEX"
    assert (diag.span.line, diag.span.column) == (2, 8)


def test_plain_disjunction():
    (rule,) = parse_program("a v b v c.").rules
    assert rule.head == (Atom("a"), Atom("b"), Atom("c"))
    assert rule.body == ()


def test_parametric_or_head():
    (rule,) = parse_program("#or{col(X,C) : color(C)} :- vertex(X).").rules
    (member,) = rule.head
    assert isinstance(member, ParametricLiteral) and member.connective == OR
    assert str(member.set.parameter) == "col(X,C)"
    assert [str(l) for l in member.set.domain] == ["color(C)"]


@pytest.mark.parametrize(
    "text, code",
    [
        ("#or{not p(X) : a(X)}.", "E-PLACE"),
        ("#and{p(X) : a(X)} :- b.", "E-PLACE"),
        ("p :- #or{a : b}.", "E-PLACE"),
        ("p(1). p(1,2).", "E-ARITY"),
        (":- .", "E-EMPTYRULE"),
        ("p(1", "E-PARSE"),
        ("p(_) :- q(_).", "E-PARSE"),
        ("p(X) :- q(X), X = a + 1.", "E-PARSE"),
    ],
)
def test_rejections(text, code):
    with pytest.raises(ParseError) as exc:
        parse_program(text)
    assert exc.value.diagnostics[0].code == code
    assert exc.value.diagnostics[0].severity == "error"


def test_recovery_reports_every_bad_rule():
    with pytest.raises(ParseError) as exc:
        parse_program("ok.\np( :- q.\nfine :- ok.\nr(1,.\n")
    lines = [d.span.line for d in exc.value.diagnostics]
    assert lines == [2, 4]


def test_error_span_is_inside_offending_rule():
    text = "a.\nb :- c, d e.\nf."
    with pytest.raises(ParseError) as exc:
        parse_program(text)
    span = exc.value.diagnostics[0].span
    assert text.index("b :-") <= span.start < text.index("f.")


def test_diagnostic_format():
    with pytest.raises(ParseError) as exc:
        parse_program("p(1). p(1,2).")
    assert str(exc.value.diagnostics[0]).startswith("error E-ARITY 1:7 ")


def test_maxint_directive():
    assert parse_program("#maxint=7. p.").maxint == 7
    assert parse_program("p.").maxint == 100


def test_keywords_usable_as_constants():
    (rule,) = parse_program("p(v) :- q(v).").rules
    assert rule.head[0].args == (Constant("v"),)


def test_anonymous_variables_are_distinct():
    rule = parse_rule("p :- q(_,_).")
    a, b = rule.body[0].atom.args
    assert a != b and a.anonymous and b.anonymous
    assert render_rule(rule) == "p :- q(_,_)."


@pytest.mark.parametrize(
    "text",
    [
        "a v b :- c.",
        ":- edge(X,Y), col(X,C), col(Y,C).",
        "in(X) :- node(X), #and{not in(Y) : arc(X,Y)}.",
        "#or{p(X,Y) : q(Y), not r(Y)} v s :- t(X).",
        ":- q(X1,Y1), q(X2,Y2), X2 = X1 + K, Y1 = Y2 + K, K > 0.",
        "p(X) :- q(X), X != 3, not r(X).",
    ],
)
def test_render_round_trip(text):
    rule = parse_rule(text)
    assert render_rule(rule) == text
    assert parse_rule(render_rule(rule)) == rule


@pytest.mark.parametrize("name", ENCODINGS)
def test_corpus_round_trips(name):
    prog = parse_program(encoding(name).text)
    assert parse_program(render_program(prog)).rules == prog.rules
