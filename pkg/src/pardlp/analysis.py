"""Static checks run before grounding: safety, p-stratification and the
restriction that keeps domain predicates deterministic.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional

from .core import Atom, BuiltinAtom, Literal, ParametricLiteral, Program, Rule, Variable
from .frontend import Diagnostic

STRICT = "strict"
WEAK = "weak"


# ---------------------------------------------------------------- variables and safety


@dataclass(frozen=True)
class VariableClassification:
    global_vars: frozenset
    local_vars: frozenset
    # one entry per parametric literal, in rule order
    set_locals: tuple = ()


def classify_variables(rule: Rule) -> VariableClassification:
    outside = set()
    for m in rule.head + rule.body:
        if not isinstance(m, ParametricLiteral):
            outside |= m.variables()
    per_set = []
    inside = set()
    for p in rule.parametric():
        local = frozenset(p.variables() - outside)
        per_set.append(local)
        inside |= local
    return VariableClassification(frozenset(outside), frozenset(inside), tuple(per_set))


@dataclass(frozen=True)
class SafetyViolation:
    variable: Variable
    condition: str  # "i" or "ii"
    rule: Rule

    def diagnostic(self) -> Diagnostic:
        if self.condition == "i":
            what = f"global variable {self.variable} is not bound by a positive standard body literal"
        else:
            what = f"local variable {self.variable} does not occur in a positive literal of its set's domain"
        return Diagnostic("error", "E-SAFE", f"{what} (condition ({self.condition})) in rule: {self.rule}", self.rule.span)


def _equality_bindable(builtin: BuiltinAtom, bound):
    """The single unbound variable an equality can bind, if any."""
    if builtin.op != "=":
        return None
    occurrences = [t for t in builtin.lhs + builtin.rhs if isinstance(t, Variable) and t not in bound]
    if len(occurrences) == 1:
        return occurrences[0]
    return None


def bound_by_body(rule: Rule):
    """Variables bound by positive standard literals, closed under equality binding."""
    bound = set()
    for m in rule.body:
        if isinstance(m, Literal) and m.positive:
            bound |= m.variables()
    changed = True
    while changed:
        changed = False
        for b in rule.builtins():
            var = _equality_bindable(b, bound)
            if var is not None:
                bound.add(var)
                changed = True
    return bound


def check_safety(rule: Rule):
    """Return the list of safety violations of ``rule`` (empty if safe)."""
    classes = classify_variables(rule)
    violations = []
    bound = bound_by_body(rule)
    for var in sorted(classes.global_vars - bound, key=lambda v: v.name):
        violations.append(SafetyViolation(var, "i", rule))
    for p, local in zip(rule.parametric(), classes.set_locals):
        in_domain = set()
        for lit in p.set.domain:
            if lit.positive:
                in_domain |= lit.variables()
        for var in sorted(local - in_domain, key=lambda v: v.name):
            violations.append(SafetyViolation(var, "ii", rule))
    return violations


# ---------------------------------------------------------------- dependency graph


@dataclass
class DependencyGraph:
    """Edges ``b -> a`` mean ``a`` depends on ``b``; labels keep the strongest kind."""

    nodes: list = field(default_factory=list)
    edges: dict = field(default_factory=dict)  # (b, a) -> STRICT | WEAK
    negative: set = field(default_factory=set)  # (b, a) pairs through a negative body literal

    def add_node(self, pred):
        if pred not in self.edges_from:
            self.nodes.append(pred)
            self.edges_from[pred] = set()

    def __post_init__(self):
        self.edges_from = defaultdict(set)
        for n in self.nodes:
            self.edges_from[n]

    def add_edge(self, b, a, label, negated=False):
        self.add_node(b)
        self.add_node(a)
        if self.edges.get((b, a)) != STRICT:
            self.edges[(b, a)] = label
        self.edges_from[b].add(a)
        if negated:
            self.negative.add((b, a))

    def successors(self, node):
        return sorted(self.edges_from.get(node, ()))

    def sccs(self):
        """Strongly connected components in topological order (sources first)."""
        index = {}
        low = {}
        stack = []
        on_stack = set()
        out = []
        counter = itertools.count()

        def visit(v):
            # iterative Tarjan
            work = [(v, iter(self.successors(v)))]
            index[v] = low[v] = next(counter)
            stack.append(v)
            on_stack.add(v)
            while work:
                node, it = work[-1]
                advanced = False
                for w in it:
                    if w not in index:
                        index[w] = low[w] = next(counter)
                        stack.append(w)
                        on_stack.add(w)
                        work.append((w, iter(self.successors(w))))
                        advanced = True
                        break
                    if w in on_stack:
                        low[node] = min(low[node], index[w])
                if advanced:
                    continue
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[node])
                if low[node] == index[node]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.append(w)
                        if w == node:
                            break
                    out.append(sorted(comp))

        for v in sorted(self.nodes):
            if v not in index:
                visit(v)
        out.reverse()
        return out

    def reachable(self, sources):
        seen = set(sources)
        todo = list(sources)
        while todo:
            n = todo.pop()
            for m in self.edges_from.get(n, ()):
                if m not in seen:
                    seen.add(m)
                    todo.append(m)
        return seen

    def path(self, src, dst, within):
        """Shortest path ``src -> ... -> dst`` using only nodes in ``within``."""
        prev = {src: None}
        todo = [src]
        while todo:
            nxt = []
            for n in todo:
                for m in self.successors(n):
                    if m in within and m not in prev:
                        prev[m] = n
                        nxt.append(m)
            todo = nxt
        if dst not in prev:
            return None
        out = [dst]
        while out[-1] != src:
            out.append(prev[out[-1]])
        return out[::-1]


def head_predicates(rule: Rule):
    out = []
    for m in rule.head:
        if isinstance(m, Atom):
            out.append(m.predicate)
        else:
            out.append(m.set.parameter.predicate)
    return out


def dependency_graph(program: Program) -> DependencyGraph:
    graph = DependencyGraph()
    for pred in program.predicates():
        graph.add_node(pred)
    for rule in program.rules:
        for p in rule.parametric():
            a = p.set.parameter.predicate
            for lit in p.set.domain:
                graph.add_edge(lit.predicate, a, STRICT, negated=not lit.positive)
        heads = head_predicates(rule)
        for m in rule.body:
            if isinstance(m, Literal):
                for a in heads:
                    graph.add_edge(m.predicate, a, WEAK, negated=not m.positive)
    return graph


# ---------------------------------------------------------------- p-stratification


@dataclass(frozen=True)
class StratificationFailure:
    cycle: tuple  # predicates, first == last

    def diagnostic(self, span=None) -> Diagnostic:
        path = " -> ".join(f"{n}/{a}" for n, a in self.cycle)
        return Diagnostic("error", "E-STRAT", f"program is not p-stratified: cycle {path} has a strict edge", span)


def check_p_stratification(program: Program):
    """Return a minimal level mapping ``{predicate: level}`` or a StratificationFailure."""
    graph = dependency_graph(program)
    comps = graph.sccs()
    comp_of = {n: i for i, comp in enumerate(comps) for n in comp}
    for comp in comps:
        members = set(comp)
        for (b, a), label in sorted(graph.edges.items()):
            if label == STRICT and b in members and a in members:
                back = graph.path(a, b, members)
                return StratificationFailure(tuple([b] + back))
    level = {}
    for i, comp in enumerate(comps):
        lv = 0
        for (b, a), label in graph.edges.items():
            if comp_of[a] == i and comp_of[b] != i:
                lv = max(lv, level[b] + (1 if label == STRICT else 0))
        for n in comp:
            level[n] = lv
    return level


def verify_level_mapping(program: Program, level) -> list:
    """Check both p-stratification conditions rule by rule; returns violations."""
    problems = []
    for rule in program.rules:
        for p in rule.parametric():
            a = p.set.parameter.predicate
            for lit in p.set.domain:
                if not level[lit.predicate] < level[a]:
                    problems.append((rule, lit.predicate, a, "i"))
        for a in head_predicates(rule):
            for m in rule.body:
                if isinstance(m, Literal) and not level[m.predicate] <= level[a]:
                    problems.append((rule, m.predicate, a, "ii"))
    return problems


# ---------------------------------------------------------------- domain restriction


@dataclass(frozen=True)
class RestrictionViolation:
    predicate: tuple
    reason: str
    rule: Optional[Rule] = None

    def diagnostic(self) -> Diagnostic:
        name = f"{self.predicate[0]}/{self.predicate[1]}"
        where = f" in rule: {self.rule}" if self.rule is not None else ""
        span = self.rule.span if self.rule is not None else None
        return Diagnostic("error", "E-DOMAIN", f"domain predicate {name} {self.reason}{where}", span)


def domain_predicates(program: Program):
    out = set()
    for rule in program.rules:
        for p in rule.parametric():
            out.update(lit.predicate for lit in p.set.domain)
    return out


def parameter_predicates(program: Program):
    return {p.set.parameter.predicate for rule in program.rules for p in rule.parametric()}


def disjunctive_predicates(program: Program):
    out = set()
    for rule in program.rules:
        if len(rule.head) > 1 or any(isinstance(m, ParametricLiteral) for m in rule.head):
            out.update(head_predicates(rule))
    return out


def _body_predicates(rule: Rule):
    for m in rule.body:
        if isinstance(m, Literal):
            yield m.predicate, not m.positive
        elif isinstance(m, ParametricLiteral):
            yield m.set.parameter.predicate, not m.set.parameter.positive
            for lit in m.set.domain:
                yield lit.predicate, not lit.positive


def _defining_rules(program: Program):
    defs = defaultdict(list)
    for rule in program.rules:
        for a in head_predicates(rule):
            defs[a].append(rule)
    return defs


def _negation_graph(program: Program, preds):
    """Dependency graph restricted to ``preds`` with negation flags on edges."""
    graph = DependencyGraph()
    for p in sorted(preds):
        graph.add_node(p)
    for rule in program.rules:
        heads = [a for a in head_predicates(rule) if a in preds]
        for b, negated in _body_predicates(rule):
            for a in heads:
                if b in preds:
                    graph.add_edge(b, a, WEAK, negated=negated)
    return graph


def _negative_cycles(graph: DependencyGraph):
    bad = set()
    for comp in graph.sccs():
        members = set(comp)
        if any(b in members and a in members for b, a in graph.negative):
            bad |= members
    return bad


def domain_closure(program: Program):
    """Domain predicates plus everything they transitively depend on."""
    defs = _defining_rules(program)
    closure = set(domain_predicates(program))
    todo = list(closure)
    while todo:
        pred = todo.pop()
        for rule in defs.get(pred, ()):
            for b, _ in _body_predicates(rule):
                if b not in closure:
                    closure.add(b)
                    todo.append(b)
    return closure


def check_domain_restriction(program: Program):
    """Violations of the requirement that domain predicates be normal and stratified."""
    defs = _defining_rules(program)
    closure = domain_closure(program)
    disjunctive = disjunctive_predicates(program)
    params = parameter_predicates(program)
    violations = []
    for pred in sorted(closure):
        seen = set()
        for rule in defs.get(pred, ()):
            if id(rule) in seen:
                continue
            seen.add(id(rule))
            if len(rule.head) > 1 or any(isinstance(m, ParametricLiteral) for m in rule.head):
                violations.append(RestrictionViolation(pred, "is defined by a disjunctive rule", rule))
            elif rule.parametric():
                violations.append(RestrictionViolation(pred, "is defined by a rule with parametric literals", rule))
        if pred in params and pred not in disjunctive:
            violations.append(RestrictionViolation(pred, "is (or depends on) a parameter predicate", None))
    graph = _negation_graph(program, closure)
    for pred in sorted(_negative_cycles(graph)):
        rule = next(iter(defs.get(pred, ())), None)
        violations.append(RestrictionViolation(pred, "is not stratified with respect to negation", rule))
    return violations


def deterministic_predicates(program: Program):
    """Predicates whose extension is fixed by a stratified normal subprogram.

    These are defined only by rules with a single standard head atom and a
    parametric-free body, have no negative cycles, and depend only on
    predicates of the same kind. Domain-restricted programs have all domain
    predicates in this set.
    """
    defs = _defining_rules(program)
    preds = set(program.predicates())
    det = set()
    for pred in preds:
        rules = defs.get(pred, ())
        if all(len(r.head) == 1 and isinstance(r.head[0], Atom) and not r.parametric() for r in rules):
            det.add(pred)
    changed = True
    while changed:
        changed = False
        for pred in sorted(det):
            for rule in defs.get(pred, ()):
                if any(b not in det for b, _ in _body_predicates(rule)):
                    det.discard(pred)
                    changed = True
                    break
        if not changed:
            bad = _negative_cycles(_negation_graph(program, det))
            if bad:
                det -= bad
                changed = True
    return det


# ---------------------------------------------------------------- driver


@dataclass
class AnalysisReport:
    safety: list = field(default_factory=list)
    stratification: Optional[StratificationFailure] = None
    levels: Optional[dict] = None
    restriction: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.safety and self.stratification is None and not self.restriction

    @property
    def sound(self):
        """Safe and p-stratified; enough for the direct-semantics oracle."""
        return not self.safety and self.stratification is None

    def diagnostics(self, restriction_severity="error"):
        out = [v.diagnostic() for v in self.safety]
        if self.stratification is not None:
            out.append(self.stratification.diagnostic())
        for v in self.restriction:
            d = v.diagnostic()
            out.append(Diagnostic(restriction_severity, d.code, d.message, d.span))
        return out


def analyze(program: Program) -> AnalysisReport:
    report = AnalysisReport()
    for rule in program.rules:
        report.safety.extend(check_safety(rule))
    strat = check_p_stratification(program)
    if isinstance(strat, StratificationFailure):
        report.stratification = strat
    else:
        report.levels = strat
    report.restriction = check_domain_restriction(program)
    return report
