"""Lexer, recursive-descent parser and renderers for the concrete syntax.

Grammar::

    program    := (directive | rule)*
    directive  := "#maxint" "=" INT "."
    rule       := head? (":-" body)? "."
    head       := headmember ("v" headmember)*
    headmember := atom | "#or" "{" atom ":" conj "}"
    body       := bodymember ("," bodymember)*
    bodymember := ["not"] atom | builtin | "#and" "{" ["not"] atom ":" conj "}"
    conj       := literal ("," literal)*
    builtin    := expr CMP expr          expr := term ("+" term)*

``%`` starts a line comment and ``<>`` is accepted for ``!=``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .core import (
    AND,
    DEFAULT_MAXINT,
    OR,
    Atom,
    BuiltinAtom,
    Constant,
    GroundRule,
    Literal,
    ParametricLiteral,
    Program,
    Rule,
    SourceSpan,
    SymbolicSet,
    Variable,
)


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    code: str
    message: str
    span: Optional[SourceSpan] = None

    def __str__(self):
        where = str(self.span) if self.span else "0:0"
        return f"{self.severity} {self.code} {where} {self.message}"


class ProgramError(Exception):
    """Raised when a program is rejected; carries one or more diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(map(str, self.diagnostics)))


class ParseError(ProgramError):
    pass


# ---------------------------------------------------------------- lexer


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: SourceSpan

    def __repr__(self):
        return f"{self.kind}:{self.text}"


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<directive>\#(?:or|and|maxint)\b)
  | (?P<implies>:-)
  | (?P<cmp><>|!=|<=|>=|<|>|=)
  | (?P<int>[0-9]+)
  | (?P<var>[A-Z][A-Za-z0-9_]*)
  | (?P<anon>_(?![A-Za-z0-9_]))
  | (?P<ident>[a-z][A-Za-z0-9_]*)
  | (?P<punct>[(){}:,.+])
    """,
    re.VERBOSE,
)

_PUNCT = {"(": "lparen", ")": "rparen", "{": "lbrace", "}": "rbrace", ":": "colon", ",": "comma", ".": "dot", "+": "plus"}
_KEYWORDS = {"v": "kw_v", "not": "kw_not"}


def _line_starts(text):
    starts = [0]
    for m in re.finditer("\n", text):
        starts.append(m.end())
    return starts


def _span(starts, start, end):
    # bisect would do; inputs are small
    line = 0
    lo, hi = 0, len(starts) - 1
    while lo <= hi:
        mid = (lo + hi) // 2
        if starts[mid] <= start:
            line = mid
            lo = mid + 1
        else:
            hi = mid - 1
    return SourceSpan(start, end, line + 1, start - starts[line] + 1)


def tokenize(text: str):
    """Split ``text`` into tokens; raises ParseError (E-LEX) on illegal input."""
    starts = _line_starts(text)
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            span = _span(starts, pos, pos + 1)
            raise ParseError([Diagnostic("error", "E-LEX", f"illegal character {text[pos]!r}", span)])
        kind = m.lastgroup
        value = m.group()
        span = _span(starts, m.start(), m.end())
        pos = m.end()
        if kind in ("ws", "comment"):
            continue
        if kind == "punct":
            kind = _PUNCT[value]
        elif kind == "ident" and value in _KEYWORDS:
            kind = _KEYWORDS[value]
        elif kind == "directive":
            kind = value[1:]
        elif kind == "cmp" and value == "<>":
            value = "!="
        tokens.append(Token(kind, value, span))
    return tokens


# ---------------------------------------------------------------- parser


class _Fail(Exception):
    def __init__(self, code, message, span):
        self.diagnostic = Diagnostic("error", code, message, span)


class Parser:
    """Parses one text; ``arities`` may be shared to check several files together."""

    def __init__(self, text: str, arities: Optional[dict] = None):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self.arities = {} if arities is None else arities
        self.diagnostics = []
        self.maxint = None
        self._anon = 0

    # token helpers

    def peek(self, offset=0):
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def at(self, *kinds):
        tok = self.peek()
        return tok is not None and tok.kind in kinds

    def next(self):
        tok = self.peek()
        if tok is None:
            raise _Fail("E-PARSE", "unexpected end of input", self._end_span())
        self.pos += 1
        return tok

    def _end_span(self):
        last = self.tokens[-1].span if self.tokens else SourceSpan(0, 0, 1, 1)
        return last

    def expect(self, kind, what=None):
        tok = self.peek()
        if tok is None or tok.kind != kind:
            found = "end of input" if tok is None else repr(tok.text)
            raise _Fail("E-PARSE", f"expected {what or kind}, found {found}", tok.span if tok else self._end_span())
        self.pos += 1
        return tok

    def _recover(self):
        while self.peek() is not None and not self.at("dot"):
            self.pos += 1
        if self.peek() is not None:
            self.pos += 1

    # program level

    def parse(self) -> Program:
        rules = []
        while self.peek() is not None:
            start = self.pos
            try:
                if self.at("maxint"):
                    self.directive()
                else:
                    rule = self.rule()
                    if rule is not None:
                        rules.append(rule)
            except _Fail as fail:
                self.diagnostics.append(fail.diagnostic)
                self.pos = start
                self._recover()
        if any(d.severity == "error" for d in self.diagnostics):
            raise ParseError(self.diagnostics)
        maxint = DEFAULT_MAXINT if self.maxint is None else self.maxint
        return Program(tuple(rules), maxint)

    def directive(self):
        self.next()
        self.expect("cmp", "'='")
        value = self.expect("int", "integer")
        self.expect("dot", "'.'")
        self.maxint = int(value.text)

    def rule(self):
        first = self.peek()
        head = []
        body = []
        if not self.at("implies", "dot"):
            head.append(self.head_member())
            while self.at("kw_v"):
                self.next()
                head.append(self.head_member())
        if self.at("implies"):
            self.next()
            if self.at("dot"):
                raise _Fail("E-EMPTYRULE", "empty rule body after ':-'", self.peek().span)
            body.append(self.body_member())
            while self.at("comma"):
                self.next()
                body.append(self.body_member())
        end = self.expect("dot", "'.'")
        if not head and not body:
            raise _Fail("E-EMPTYRULE", "rule with empty head and empty body", first.span)
        span = SourceSpan(first.span.start, end.span.end, first.span.line, first.span.column)
        for member in head:
            if isinstance(member, Atom):
                anon = [t for t in member.args if isinstance(t, Variable) and t.anonymous]
            else:
                anon = [v for v in member.variables() if v.anonymous]
            if anon:
                raise _Fail("E-PARSE", "anonymous variable in rule head", span)
        return Rule(tuple(head), tuple(body), span)

    def head_member(self):
        tok = self.peek()
        if self.at("or"):
            lit = self.parametric(OR)
            if not lit.set.parameter.positive:
                raise _Fail("E-PLACE", "parameter of #or must be a positive literal", tok.span)
            return lit
        if self.at("and"):
            raise _Fail("E-PLACE", "#and is only allowed in rule bodies", tok.span)
        if self.at("kw_not"):
            raise _Fail("E-PLACE", "negative literal in rule head", tok.span)
        if self._builtin_ahead():
            raise _Fail("E-PLACE", "builtin in rule head", tok.span)
        return self.atom()

    def body_member(self):
        tok = self.peek()
        if self.at("and"):
            return self.parametric(AND)
        if self.at("or"):
            raise _Fail("E-PLACE", "#or is only allowed in rule heads", tok.span)
        if self._builtin_ahead():
            return self.builtin()
        return self.literal()

    def _builtin_ahead(self):
        tok = self.peek()
        if tok is None:
            return False
        if tok.kind in ("var", "int", "anon"):
            return True
        if tok.kind in ("ident", "kw_v"):
            nxt = self.peek(1)
            return nxt is not None and nxt.kind in ("cmp", "plus")
        return False

    def parametric(self, connective):
        tok = self.next()
        self.expect("lbrace", "'{'")
        param = self.literal()
        self.expect("colon", "':'")
        conj = [self.literal()]
        while self.at("comma"):
            self.next()
            conj.append(self.literal())
        end = self.expect("rbrace", "'}'")
        span = SourceSpan(tok.span.start, end.span.end, tok.span.line, tok.span.column)
        return ParametricLiteral(connective, SymbolicSet(param, tuple(conj)), span)

    def literal(self):
        tok = self.peek()
        positive = True
        if self.at("kw_not"):
            self.next()
            positive = False
        atom = self.atom()
        last = self.tokens[self.pos - 1].span
        span = SourceSpan(tok.span.start, last.end, tok.span.line, tok.span.column) if tok else None
        return Literal(atom, positive, span)

    def atom(self):
        tok = self.peek()
        if tok is None or tok.kind not in ("ident", "kw_v"):
            found = "end of input" if tok is None else repr(tok.text)
            raise _Fail("E-PARSE", f"expected atom, found {found}", tok.span if tok else self._end_span())
        self.next()
        args = []
        if self.at("lparen"):
            self.next()
            args.append(self.term())
            while self.at("comma"):
                self.next()
                args.append(self.term())
            self.expect("rparen", "')'")
        known = self.arities.setdefault(tok.text, len(args))
        if known != len(args):
            raise _Fail("E-ARITY", f"predicate {tok.text} used with arity {len(args)} and {known}", tok.span)
        return Atom(tok.text, tuple(args))

    def term(self):
        tok = self.next()
        if tok.kind == "var":
            return Variable(tok.text)
        if tok.kind == "anon":
            self._anon += 1
            return Variable(f"_{self._anon}", anonymous=True)
        if tok.kind == "int":
            return Constant(int(tok.text))
        if tok.kind in ("ident", "kw_v", "kw_not"):
            return Constant(tok.text)
        raise _Fail("E-PARSE", f"expected term, found {tok.text!r}", tok.span)

    def expression(self):
        terms = [self.term()]
        while self.at("plus"):
            self.next()
            terms.append(self.term())
        if len(terms) > 1 and any(isinstance(t, Constant) and not t.is_int for t in terms):
            raise _Fail("E-PARSE", "arithmetic over a symbolic constant", self.tokens[self.pos - 1].span)
        return tuple(terms)

    def builtin(self):
        tok = self.peek()
        lhs = self.expression()
        op = self.expect("cmp", "comparison operator")
        rhs = self.expression()
        last = self.tokens[self.pos - 1].span
        return BuiltinAtom(op.text, lhs, rhs, SourceSpan(tok.span.start, last.end, tok.span.line, tok.span.column))


def parse_program(text: str, arities: Optional[dict] = None) -> Program:
    """Parse program text; raises ParseError with diagnostics on rejection."""
    return Parser(text, arities).parse()


def parse_rule(text: str) -> Rule:
    program = parse_program(text)
    if len(program.rules) != 1:
        raise ValueError(f"expected exactly one rule, got {len(program.rules)}")
    return program.rules[0]


# ---------------------------------------------------------------- rendering


def _render_set(connective, s):
    return f"#{connective}{{{s.parameter} : {', '.join(map(str, s.domain))}}}"


def _render_member(m):
    if isinstance(m, ParametricLiteral):
        return _render_set(m.connective, m.set)
    return str(m)


def render_rule(rule: Rule) -> str:
    head = " v ".join(_render_member(m) for m in rule.head)
    if not rule.body:
        return f"{head}."
    body = ", ".join(_render_member(m) for m in rule.body)
    return f"{head} :- {body}." if head else f":- {body}."


def render_program(program: Program) -> str:
    return "".join(f"{render_rule(r)}\n" for r in program.rules)


def render_ground_rule(rule: GroundRule) -> str:
    """Render a ground rule; a constraint with an empty body prints as ``:- 0 = 0.``."""

    head = " v ".join(map(str, rule.head))
    if not rule.body:
        return f"{head}." if head else ":- 0 = 0."
    body = ", ".join(map(str, rule.body))
    return f"{head} :- {body}." if head else f":- {body}."
