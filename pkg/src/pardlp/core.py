"""Syntax-tree and ground-representation types shared by every stage.

All values are frozen dataclasses with structural equality. Source spans
ride along on parsed objects but never take part in comparisons.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

DEFAULT_MAXINT = 100

OR = "or"
AND = "and"

COMPARATORS = ("=", "!=", "<", "<=", ">", ">=")


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int
    line: int
    column: int

    def __str__(self):
        return f"{self.line}:{self.column}"


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Variable:
    name: str
    anonymous: bool = False

    def __str__(self):
        return "_" if self.anonymous else self.name


@dataclass(frozen=True)
class Constant:
    value: Union[int, str]

    @property
    def is_int(self):
        return isinstance(self.value, int)

    @property
    def key(self):
        # integers sort numerically before symbolic constants
        return (0, self.value, "") if self.is_int else (1, 0, self.value)

    def __lt__(self, other):
        return self.key < other.key

    def __str__(self):
        return str(self.value)


Term = Union[Variable, Constant]


def term_vars(terms: Iterable[Term]):
    return {t for t in terms if isinstance(t, Variable)}


# ---------------------------------------------------------------- atoms and literals


@dataclass(frozen=True)
class Atom:
    name: str
    args: tuple = ()

    @property
    def arity(self):
        return len(self.args)

    @property
    def predicate(self):
        return (self.name, len(self.args))

    @property
    def is_ground(self):
        return all(isinstance(t, Constant) for t in self.args)

    @property
    def key(self):
        """Canonical sort key; only meaningful for ground atoms."""
        return (self.name, len(self.args), tuple(t.key for t in self.args))

    def variables(self):
        return term_vars(self.args)

    def substitute(self, subst):
        if not subst:
            return self
        return Atom(self.name, tuple(subst.get(t, t) if isinstance(t, Variable) else t for t in self.args))

    def __lt__(self, other):
        return self.key < other.key

    def __str__(self):
        if not self.args:
            return self.name
        return f"{self.name}({','.join(map(str, self.args))})"


@dataclass(frozen=True)
class Literal:
    atom: Atom
    positive: bool = True
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    @property
    def predicate(self):
        return self.atom.predicate

    @property
    def key(self):
        return (self.atom.key, not self.positive)

    def variables(self):
        return self.atom.variables()

    def substitute(self, subst):
        return Literal(self.atom.substitute(subst), self.positive, self.span)

    def __str__(self):
        return str(self.atom) if self.positive else f"not {self.atom}"


def negate(lit: Literal) -> Literal:
    return Literal(lit.atom, not lit.positive, lit.span)


def canonical_compare(a: Atom, b: Atom) -> int:
    """-1, 0 or 1 under the canonical order of ground atoms."""
    ka, kb = a.key, b.key
    return (ka > kb) - (ka < kb)


# ---------------------------------------------------------------- builtins


@dataclass(frozen=True)
class BuiltinAtom:
    """Comparison between two sums of terms, e.g. ``X2 = X1 + K``."""

    op: str
    lhs: tuple
    rhs: tuple
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    def variables(self):
        return term_vars(self.lhs) | term_vars(self.rhs)

    @property
    def has_arithmetic(self):
        return len(self.lhs) > 1 or len(self.rhs) > 1

    def substitute(self, subst):
        def sub(expr):
            return tuple(subst.get(t, t) if isinstance(t, Variable) else t for t in expr)

        return BuiltinAtom(self.op, sub(self.lhs), sub(self.rhs), self.span)

    def __str__(self):
        return f"{' + '.join(map(str, self.lhs))} {self.op} {' + '.join(map(str, self.rhs))}"


# ---------------------------------------------------------------- parametric literals


@dataclass(frozen=True)
class SymbolicSet:
    parameter: Literal
    domain: tuple

    def variables(self):
        out = self.parameter.variables()
        for lit in self.domain:
            out |= lit.variables()
        return out

    def substitute(self, subst):
        return SymbolicSet(self.parameter.substitute(subst), tuple(l.substitute(subst) for l in self.domain))

    def __str__(self):
        return f"{{{self.parameter} : {', '.join(map(str, self.domain))}}}"


@dataclass(frozen=True)
class ParametricLiteral:
    connective: str
    set: SymbolicSet
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    def variables(self):
        return self.set.variables()

    def substitute(self, subst):
        return ParametricLiteral(self.connective, self.set.substitute(subst), self.span)

    def __str__(self):
        return f"#{self.connective}{self.set}"


# ---------------------------------------------------------------- rules and programs


@dataclass(frozen=True)
class Rule:
    head: tuple = ()
    body: tuple = ()
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    @property
    def is_constraint(self):
        return not self.head

    @property
    def is_fact(self):
        return not self.body and len(self.head) == 1 and isinstance(self.head[0], Atom)

    def parametric(self):
        return [m for m in itertools.chain(self.head, self.body) if isinstance(m, ParametricLiteral)]

    def standard_body(self):
        return [m for m in self.body if isinstance(m, Literal)]

    def builtins(self):
        return [m for m in self.body if isinstance(m, BuiltinAtom)]

    def variables(self):
        out = set()
        for m in itertools.chain(self.head, self.body):
            out |= m.variables()
        return out

    def __str__(self):
        from .frontend import render_rule

        return render_rule(self)


@dataclass(frozen=True)
class Program:
    rules: tuple = ()
    maxint: int = DEFAULT_MAXINT

    def predicates(self):
        """All standard predicates (name, arity), in first-occurrence order."""
        seen = {}
        for rule in self.rules:
            for atom in rule_atoms(rule):
                seen.setdefault(atom.predicate, None)
        return list(seen)

    def constants(self):
        out = set()
        for rule in self.rules:
            for atom in rule_atoms(rule):
                out.update(t for t in atom.args if isinstance(t, Constant))
            for b in rule.builtins():
                out.update(t for t in b.lhs + b.rhs if isinstance(t, Constant))
        return out

    @property
    def uses_arithmetic(self):
        return any(rule.builtins() for rule in self.rules)

    def universe(self):
        """U_P in canonical order."""
        consts = self.constants()
        if self.uses_arithmetic:
            consts |= {Constant(i) for i in range(self.maxint + 1)}
        return sorted(consts)

    def merge(self, other: "Program") -> "Program":
        return Program(self.rules + other.rules, max(self.maxint, other.maxint))

    def __str__(self):
        return "\n".join(str(r) for r in self.rules)


def rule_atoms(rule: Rule):
    """Every standard atom in a rule, including those inside symbolic sets."""
    for m in itertools.chain(rule.head, rule.body):
        if isinstance(m, Atom):
            yield m
        elif isinstance(m, Literal):
            yield m.atom
        elif isinstance(m, ParametricLiteral):
            yield m.set.parameter.atom
            for lit in m.set.domain:
                yield lit.atom


def herbrand_base(program: Program):
    universe = program.universe()
    base = set()
    for name, arity in program.predicates():
        for args in itertools.product(universe, repeat=arity):
            base.add(Atom(name, args))
    return base


# ---------------------------------------------------------------- ground programs


@dataclass(frozen=True)
class GroundPair:
    parameter: Literal
    domain: tuple

    @property
    def key(self):
        return (self.parameter.key, tuple(l.key for l in self.domain))

    def __str__(self):
        return f"<{self.parameter} : {', '.join(map(str, self.domain))}>"


@dataclass(frozen=True)
class GroundParametric:
    """An instantiated parametric literal: connective plus its ground pair set."""

    connective: str
    pairs: tuple

    def __str__(self):
        return f"#{self.connective}{{{', '.join(map(str, self.pairs))}}}"


@dataclass(frozen=True)
class GroundRule:
    head: tuple = ()
    body: tuple = ()
    origin: Optional[int] = field(default=None, compare=False)

    @property
    def is_standard(self):
        return not any(isinstance(m, GroundParametric) for m in self.head + self.body)

    @property
    def key(self):
        def member_key(m):
            if isinstance(m, Atom):
                return (0, m.key)
            if isinstance(m, Literal):
                return (0, m.key)
            return (1, m.connective, tuple(p.key for p in m.pairs))

        return (not self.head, tuple(map(member_key, self.head)), tuple(map(member_key, self.body)))

    def __str__(self):
        from .frontend import render_ground_rule

        return render_ground_rule(self)


@dataclass(frozen=True)
class GroundProgram:
    rules: tuple = ()

    @property
    def is_standard(self):
        return all(r.is_standard for r in self.rules)

    def atoms(self):
        out = set()
        for r in self.rules:
            for m in r.head + r.body:
                if isinstance(m, Atom):
                    out.add(m)
                elif isinstance(m, Literal):
                    out.add(m.atom)
                else:
                    for p in m.pairs:
                        out.add(p.parameter.atom)
                        out.update(l.atom for l in p.domain)
        return out

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def __str__(self):
        return "".join(f"{r}\n" for r in self.rules)


class Interpretation(frozenset):
    """A set of ground atoms with canonical iteration and rendering."""

    def canonical(self):
        return sorted(self, key=lambda a: a.key)

    @property
    def key(self):
        return tuple(a.key for a in self.canonical())

    def project(self, names):
        names = set(names)
        return Interpretation(a for a in self if a.name in names)

    def __repr__(self):
        return f"Interpretation({str(self)})"

    def __str__(self):
        return "{" + ", ".join(map(str, self.canonical())) + "}"


def holds(lit: Literal, interpretation) -> bool:
    return (lit.atom in interpretation) == lit.positive
