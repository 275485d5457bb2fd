"""Instantiation of programs into variable-free form.

Two outputs are produced from the same non-ground program:

* ``instantiate`` keeps parametric literals as ground pair sets over the
  whole universe.  This is the faithful instantiation used by the
  direct-semantics oracle.
* ``ground_program`` evaluates deterministic (normal, stratified)
  predicates first and then expands every parametric literal into the
  plain disjunction or conjunction of the parameters whose domain holds.
  The result is a standard ground program for the solver.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field

from .analysis import _defining_rules, _negation_graph, deterministic_predicates, domain_closure, head_predicates
from .core import (
    AND,
    OR,
    Atom,
    BuiltinAtom,
    Constant,
    GroundPair,
    GroundParametric,
    GroundProgram,
    GroundRule,
    Literal,
    ParametricLiteral,
    Program,
    Rule,
    Variable,
)
from .frontend import Diagnostic, ProgramError


class MaxintError(ProgramError):
    code = "E-MAXINT"

    def __init__(self, message):
        super().__init__([Diagnostic("error", self.code, message)])


# ---------------------------------------------------------------- builtins


def eval_expr(expr, maxint):
    """Value of a ground sum; None when a symbolic constant meets ``+``."""
    if len(expr) == 1:
        return expr[0]
    total = 0
    for t in expr:
        if not t.is_int:
            return None
        total += t.value
    if total > maxint:
        raise MaxintError(f"arithmetic result {total} exceeds maxint {maxint}")
    return Constant(total)


def eval_builtin(b: BuiltinAtom, maxint) -> bool:
    lhs = eval_expr(b.lhs, maxint)
    rhs = eval_expr(b.rhs, maxint)
    if lhs is None or rhs is None:
        return False
    if b.op == "=":
        return lhs == rhs
    if b.op == "!=":
        return lhs != rhs
    kl, kr = lhs.key, rhs.key
    return {"<": kl < kr, "<=": kl <= kr, ">": kl > kr, ">=": kl >= kr}[b.op]


def _bind_equality(b: BuiltinAtom, subst, maxint):
    """Solve ``b`` for its single unbound variable.

    Returns ``(var, value)``, ``False`` when no value in the universe
    satisfies the equality, or None when ``b`` cannot bind anything yet.
    """
    if b.op != "=":
        return None
    free = [t for t in b.lhs + b.rhs if isinstance(t, Variable) and t not in subst]
    if len(free) != 1:
        return None
    var = free[0]
    if var in b.lhs:
        own, other = b.lhs, b.rhs
    else:
        own, other = b.rhs, b.lhs
    other = tuple(subst.get(t, t) if isinstance(t, Variable) else t for t in other)
    target = eval_expr(other, maxint)
    if target is None:
        return False
    rest = [subst.get(t, t) if isinstance(t, Variable) else t for t in own if t != var]
    if not rest:
        return var, target
    if not target.is_int or any(not t.is_int for t in rest):
        return False
    value = target.value - sum(t.value for t in rest)
    if value < 0:
        return False
    return var, Constant(value)


# ---------------------------------------------------------------- matching


class AtomIndex:
    """Ground atoms grouped by predicate."""

    def __init__(self, atoms=()):
        self.by_pred = defaultdict(list)
        self.atoms = set()
        for a in atoms:
            self.add(a)

    def add(self, atom):
        if atom in self.atoms:
            return False
        self.atoms.add(atom)
        self.by_pred[atom.predicate].append(atom)
        return True

    def __contains__(self, atom):
        return atom in self.atoms

    def __len__(self):
        return len(self.atoms)


def _match(pattern: Atom, ground: Atom, subst):
    out = None
    for p, g in zip(pattern.args, ground.args):
        if isinstance(p, Variable):
            cur = (out or subst).get(p)
            if cur is None:
                if out is None:
                    out = dict(subst)
                out[p] = g
            elif cur != g:
                return None
        elif p != g:
            return None
    return subst if out is None else out


def join(positives, builtins, index: AtomIndex, subst, maxint):
    """Yield every extension of ``subst`` making all ``positives`` members of
    ``index`` and all ``builtins`` true."""
    positives = list(positives)
    builtins = list(builtins)

    def step(subst, todo_pos, todo_bi):
        # evaluate or use builtins as soon as possible
        for i, b in enumerate(todo_bi):
            if b.variables() <= subst.keys():
                if not eval_builtin(b.substitute(subst), maxint):
                    return
                yield from step(subst, todo_pos, todo_bi[:i] + todo_bi[i + 1 :])
                return
            bound = _bind_equality(b, subst, maxint)
            if bound is False:
                return
            if bound is not None:
                var, value = bound
                yield from step({**subst, var: value}, todo_pos, todo_bi[:i] + todo_bi[i + 1 :])
                return
        if not todo_pos:
            if not todo_bi:
                yield subst
            return
        # most-bound literal first
        best = max(range(len(todo_pos)), key=lambda i: (len(todo_pos[i].variables() & subst.keys()) - len(todo_pos[i].variables()), -i))
        lit = todo_pos[best]
        rest = todo_pos[:best] + todo_pos[best + 1 :]
        pattern = lit.atom
        if pattern.variables() <= subst.keys():
            if pattern.substitute(subst) in index:
                yield from step(subst, rest, todo_bi)
            return
        for g in index.by_pred.get(pattern.predicate, ()):
            ext = _match(pattern, g, subst)
            if ext is not None:
                yield from step(ext, rest, todo_bi)

    yield from step(dict(subst), positives, builtins)


# ---------------------------------------------------------------- symbolic sets


def instantiate_symbolic_set(s, universe):
    """All ground pairs of a symbolic set (globals already substituted) over ``universe``."""
    local = sorted(s.variables(), key=lambda v: v.name)
    pairs = set()
    for values in itertools.product(universe, repeat=len(local)):
        sub = dict(zip(local, values))
        ground = s.substitute(sub)
        pairs.add(GroundPair(ground.parameter, ground.domain))
    return sorted(pairs, key=lambda p: p.key)


def _domain_pairs(s, domain: "DomainInterpretation", maxint):
    """Pairs of ``s`` whose domain conjunction holds in ``domain``."""
    positives = [l for l in s.domain if l.positive]
    negatives = [l for l in s.domain if not l.positive]
    pairs = set()
    for sub in join(positives, (), domain.index, {}, maxint):
        if any(l.atom.substitute(sub) in domain for l in negatives):
            continue
        g = s.substitute(sub)
        pairs.add(GroundPair(g.parameter, g.domain))
    return sorted(pairs, key=lambda p: p.key)


# ---------------------------------------------------------------- domain evaluation


@dataclass
class DomainInterpretation:
    """Extension of the deterministic predicates, decided before anything else."""

    predicates: frozenset
    index: AtomIndex = field(default_factory=AtomIndex)
    origin: dict = field(default_factory=dict)

    @property
    def atoms(self):
        return frozenset(self.index.atoms)

    def __contains__(self, atom):
        return atom in self.index

    def decides(self, atom):
        return atom.predicate in self.predicates

    def of(self, name):
        return {a for a in self.index.atoms if a.name == name}


def evaluate_domain(program: Program, predicates=None) -> DomainInterpretation:
    """Bottom-up, stratum-by-stratum evaluation of the deterministic subprogram."""
    if predicates is None:
        predicates = deterministic_predicates(program)
    predicates = frozenset(predicates)
    result = DomainInterpretation(predicates)
    defs = _defining_rules(program)
    index_of = {id(r): i for i, r in enumerate(program.rules)}
    graph = _negation_graph(program, predicates)
    for comp in graph.sccs():
        rules = []
        seen = set()
        for pred in comp:
            for r in defs.get(pred, ()):
                if id(r) not in seen:
                    seen.add(id(r))
                    rules.append(r)
        changed = True
        while changed:
            changed = False
            for r in rules:
                positives = [l for l in r.body if isinstance(l, Literal) and l.positive]
                negatives = [l for l in r.body if isinstance(l, Literal) and not l.positive]
                for sub in list(join(positives, r.builtins(), result.index, {}, program.maxint)):
                    if any(l.atom.substitute(sub) in result.index for l in negatives):
                        continue
                    head = r.head[0].substitute(sub)
                    if result.index.add(head):
                        result.origin[head] = index_of[id(r)]
                        changed = True
    return result


# ---------------------------------------------------------------- global instances


def global_instances(rule: Rule, universe, possible: AtomIndex = None, maxint=100):
    """Rules obtained by substituting the rule's global variables.

    Without ``possible`` every substitution over ``universe`` is produced.
    With it, positive standard body literals are joined against the atoms
    that can possibly be true, which skips instances whose body can never
    hold.
    """
    from .analysis import classify_variables

    global_vars = sorted(classify_variables(rule).global_vars, key=lambda v: v.name)
    if possible is None:
        for values in itertools.product(universe, repeat=len(global_vars)):
            yield _apply(rule, dict(zip(global_vars, values)))
        return
    positives = [l for l in rule.body if isinstance(l, Literal) and l.positive]
    for sub in join(positives, rule.builtins(), possible, {}, maxint):
        yield _apply(rule, sub)


def _apply(rule: Rule, sub):
    return Rule(tuple(m.substitute(sub) for m in rule.head), tuple(m.substitute(sub) for m in rule.body), rule.span)


def _check_constants(program: Program):
    for c in program.constants():
        if c.is_int and c.value > program.maxint:
            raise MaxintError(f"integer constant {c.value} exceeds maxint {program.maxint}")


def possible_atoms(program: Program, domain: DomainInterpretation = None) -> AtomIndex:
    """Over-approximation of the atoms that can belong to some answer set.

    Negation and parametric AND literals are ignored, so the fixpoint is an
    upper bound.  Atoms of predicates decided by ``domain`` are taken from
    it exactly.
    """
    decided = domain.predicates if domain is not None else frozenset()
    index = AtomIndex(domain.atoms if domain is not None else ())
    rules = [r for r in program.rules if not (set(head_predicates(r)) & decided)]
    changed = True
    while changed:
        changed = False
        for r in rules:
            positives = [l for l in r.body if isinstance(l, Literal) and l.positive]
            negatives = [l for l in r.body if isinstance(l, Literal) and not l.positive and l.predicate in decided]
            for sub in list(join(positives, r.builtins(), index, {}, program.maxint)):
                if any(l.atom.substitute(sub) in domain for l in negatives):
                    continue
                for m in r.head:
                    if isinstance(m, Atom):
                        changed |= index.add(m.substitute(sub))
                        continue
                    s = m.set.substitute(sub)
                    pos = [l for l in s.domain if l.positive]
                    neg = [l for l in s.domain if not l.positive and l.predicate in decided]
                    for lsub in list(join(pos, (), index, {}, program.maxint)):
                        if any(l.atom.substitute(lsub) in domain for l in neg):
                            continue
                        changed |= index.add(s.parameter.atom.substitute(lsub))
    return index


# ---------------------------------------------------------------- faithful instantiation


def _ground_rule_sort(rules):
    unique = {}
    for r in rules:
        unique.setdefault(r, r)
    return GroundProgram(tuple(sorted(unique.values(), key=lambda r: r.key)))


def instantiate(program: Program, prune=True) -> GroundProgram:
    """Ground(P): global substitution, then every symbolic set replaced by its
    full instantiation over the universe.  Builtins are evaluated away."""
    _check_constants(program)
    universe = program.universe()
    possible = possible_atoms(program) if prune else None
    out = []
    for i, rule in enumerate(program.rules):
        for inst in global_instances(rule, universe, possible, program.maxint):
            if not all(eval_builtin(b, program.maxint) for b in inst.builtins()):
                continue
            head = tuple(
                m if isinstance(m, Atom) else GroundParametric(OR, tuple(instantiate_symbolic_set(m.set, universe)))
                for m in inst.head
            )
            body = tuple(
                m if isinstance(m, Literal) else GroundParametric(AND, tuple(instantiate_symbolic_set(m.set, universe)))
                for m in inst.body
                if not isinstance(m, BuiltinAtom)
            )
            out.append(GroundRule(tuple(sorted(set(head), key=_member_key)), body, origin=i))
    return _ground_rule_sort(out)


def _member_key(m):
    if isinstance(m, Atom):
        return (0, m.key)
    if isinstance(m, Literal):
        return (0, m.key)
    return (1, m.connective, tuple(p.key for p in m.pairs))


# ---------------------------------------------------------------- expansion


@dataclass(frozen=True)
class ExpandedGroundProgram(GroundProgram):
    """A standard ground program: no variables, no parametric literals."""

    def __post_init__(self):
        if not self.is_standard:
            raise ValueError("expanded program contains parametric literals")


def expand_parametric(rule: Rule, domain: DomainInterpretation, maxint=100):
    """Replace each parametric literal of a globally-ground rule by the
    disjunction (head) or conjunction (body) of its useful parameters.

    Returns a standard GroundRule, or None when a ground builtin is false.
    """
    head = []
    body = []
    for m in rule.head:
        if isinstance(m, Atom):
            head.append(m)
        else:
            head.extend(p.parameter.atom for p in _domain_pairs(m.set, domain, maxint))
    for m in rule.body:
        if isinstance(m, BuiltinAtom):
            if not eval_builtin(m, maxint):
                return None
        elif isinstance(m, Literal):
            body.append(m)
        else:
            body.extend(p.parameter for p in _domain_pairs(m.set, domain, maxint))
    return GroundRule(tuple(_dedupe(head)), tuple(_dedupe(body)))


def _dedupe(items):
    return list(dict.fromkeys(items))


def _simplify(rule: GroundRule, domain: DomainInterpretation, possible: AtomIndex):
    """Drop literals whose value is already fixed; None if the rule can never fire."""
    body = []
    for lit in rule.body:
        atom = lit.atom
        if domain.decides(atom):
            if (atom in domain) != lit.positive:
                return None
            continue
        if atom not in possible:
            if lit.positive:
                return None
            continue
        body.append(lit)
    pos = {l.atom for l in body if l.positive}
    if any(not l.positive and l.atom in pos for l in body):
        return None
    head = sorted(set(rule.head), key=lambda a: a.key)
    if pos & set(head):
        return None
    body = sorted(set(body), key=lambda l: (not l.positive, l.atom.key))
    return GroundRule(tuple(head), tuple(body), rule.origin)


def _require_restriction(program: Program, det):
    missing = domain_closure(program) - det
    if missing:
        names = ", ".join(f"{n}/{a}" for n, a in sorted(missing))
        raise ProgramError([Diagnostic("error", "E-DOMAIN", f"domain predicates not normal and stratified: {names}")])


def ground_program(program: Program, prune=True) -> ExpandedGroundProgram:
    """Expanded standard ground program with the same answer sets as ``program``."""
    _check_constants(program)
    det = deterministic_predicates(program)
    _require_restriction(program, det)
    domain = evaluate_domain(program, det)
    out = []
    if prune:
        possible = possible_atoms(program, domain)
        for atom in domain.index.atoms:
            out.append(GroundRule((atom,), (), origin=domain.origin.get(atom)))
        for i, rule in enumerate(program.rules):
            if set(head_predicates(rule)) & det:
                continue
            for inst in global_instances(rule, None, possible, program.maxint):
                g = expand_parametric(inst, domain, program.maxint)
                if g is None:
                    continue
                g = _simplify(GroundRule(g.head, g.body, origin=i), domain, possible)
                if g is not None:
                    out.append(g)
    else:
        universe = program.universe()
        for i, rule in enumerate(program.rules):
            for inst in global_instances(rule, universe, None, program.maxint):
                g = expand_parametric(inst, domain, program.maxint)
                if g is not None:
                    out.append(GroundRule(g.head, g.body, origin=i))
    return ExpandedGroundProgram(_ground_rule_sort(out).rules)
