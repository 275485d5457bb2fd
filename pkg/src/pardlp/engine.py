"""Answer-set semantics for ground programs.

Two independent routes compute answer sets:

* ``oracle_answer_sets`` applies the reduct definition literally to every
  candidate interpretation of a ground program that still carries its
  parametric pair sets.
* ``solve`` searches a standard (expanded) ground program with
  propagation, and certifies each total candidate with ``is_answer_set``.
"""

from __future__ import annotations

import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

from .core import AND, OR, Atom, GroundParametric, GroundProgram, Interpretation, Literal, holds
from .frontend import Diagnostic, ProgramError

DEFAULT_ORACLE_BOUND = 24


class OracleBoundError(ProgramError):
    code = "E-ORACLE-BOUND"

    def __init__(self, count, bound):
        self.count = count
        self.bound = bound
        super().__init__(
            [Diagnostic("error", self.code, f"{count} undetermined atoms exceed the oracle bound of {bound}")]
        )


# ---------------------------------------------------------------- valuation


def valuate_set(pairs, interpretation) -> list:
    """Parameters of the pairs whose domain conjunction is true."""
    out = []
    for pair in pairs:
        if all(holds(l, interpretation) for l in pair.domain) and pair.parameter not in out:
            out.append(pair.parameter)
    return out


def eval_parametric(connective, pairs, interpretation) -> bool:
    values = valuate_set(pairs, interpretation)
    if connective == OR:
        return any(holds(l, interpretation) for l in values)
    return all(holds(l, interpretation) for l in values)


def _member_true(m, interpretation):
    if isinstance(m, Atom):
        return m in interpretation
    if isinstance(m, Literal):
        return holds(m, interpretation)
    return eval_parametric(m.connective, m.pairs, interpretation)


def is_model(program: GroundProgram, interpretation) -> bool:
    """Every ground rule has a true head or a false body."""
    for r in program.rules:
        if all(_member_true(m, interpretation) for m in r.body) and not any(
            _member_true(m, interpretation) for m in r.head
        ):
            return False
    return True


# ---------------------------------------------------------------- reduct


@dataclass(frozen=True)
class PositiveRule:
    head: frozenset
    body: frozenset

    def __str__(self):
        head = " v ".join(str(a) for a in sorted(self.head, key=lambda a: a.key))
        body = ", ".join(str(a) for a in sorted(self.body, key=lambda a: a.key))
        if not body:
            return f"{head}." if head else ":- 0 = 0."
        return f"{head} :- {body}." if head else f":- {body}."


@dataclass(frozen=True)
class Reduct:
    rules: tuple

    def atoms(self):
        out = set()
        for r in self.rules:
            out |= r.head | r.body
        return out

    def __str__(self):
        return "".join(f"{r}\n" for r in self.rules)


def gl_reduct(program: GroundProgram, interpretation) -> Reduct:
    """Positive program obtained by the four reduct steps w.r.t. ``interpretation``."""
    rules = []
    for r in program.rules:
        head = []
        for m in r.head:
            if isinstance(m, GroundParametric):
                # step 1: the OR pair set becomes the disjunction of its valuation
                head.extend(l.atom for l in valuate_set(m.pairs, interpretation))
            else:
                head.append(m)
        body = []
        for m in r.body:
            if isinstance(m, GroundParametric):
                # step 2: the AND pair set becomes the conjunction of its valuation
                body.extend(valuate_set(m.pairs, interpretation))
            else:
                body.append(m)
        # step 3
        if any(not l.positive and l.atom in interpretation for l in body):
            continue
        # step 4
        rules.append(PositiveRule(frozenset(head), frozenset(l.atom for l in body if l.positive)))
    return Reduct(tuple(dict.fromkeys(rules)))


def is_closed(interpretation, reduct: Reduct) -> bool:
    return all(not (r.body <= interpretation) or (r.head & interpretation) for r in reduct.rules)


def _dpll(clauses):
    """Satisfiability of CNF ``clauses`` (lists of non-zero ints)."""
    clauses = [list(c) for c in clauses]

    def simplify(clauses, lit):
        out = []
        for c in clauses:
            if lit in c:
                continue
            if -lit in c:
                c = [x for x in c if x != -lit]
                if not c:
                    return None
            out.append(c)
        return out

    def solve(clauses):
        while True:
            unit = next((c[0] for c in clauses if len(c) == 1), None)
            if unit is None:
                break
            clauses = simplify(clauses, unit)
            if clauses is None:
                return False
        if not clauses:
            return True
        lit = clauses[0][0]
        for choice in (lit, -lit):
            rest = simplify(clauses, choice)
            if rest is not None and solve(rest):
                return True
        return False

    return solve(clauses)


def is_minimal_closed(interpretation, reduct: Reduct) -> bool:
    """True iff no proper subset of ``interpretation`` is closed under ``reduct``.

    The search is restricted to subsets of the interpretation; a Horn
    reduct is settled by its least model, anything else by DPLL.
    """
    atoms = sorted(interpretation, key=lambda a: a.key)
    if not atoms:
        return True
    var = {a: i + 1 for i, a in enumerate(atoms)}
    relevant = []
    horn = True
    for r in reduct.rules:
        if not r.body <= interpretation:
            continue
        head = [var[a] for a in r.head if a in var]
        if len(head) > 1:
            horn = False
        relevant.append(([var[a] for a in r.body], head))
    if horn:
        derived = set()
        changed = True
        while changed:
            changed = False
            for body, head in relevant:
                if head and head[0] not in derived and all(b in derived for b in body):
                    derived.add(head[0])
                    changed = True
        return len(derived) == len(atoms)
    clauses = [[-b for b in body] + head for body, head in relevant]
    clauses.append([-v for v in var.values()])
    return not _dpll(clauses)


def is_answer_set(program: GroundProgram, interpretation) -> bool:
    interpretation = frozenset(interpretation)
    reduct = gl_reduct(program, interpretation)
    return is_closed(interpretation, reduct) and is_minimal_closed(interpretation, reduct)


# ---------------------------------------------------------------- results


@dataclass
class SolveStats:
    ground_rules: int = 0
    choices: int = 0
    candidates: int = 0
    minimality_checks: int = 0
    answer_sets: int = 0
    seconds: float = 0.0


@dataclass
class AnswerSetResult:
    answer_sets: List[Interpretation] = field(default_factory=list)
    stats: SolveStats = field(default_factory=SolveStats)

    @property
    def coherent(self):
        return bool(self.answer_sets)

    def __len__(self):
        return len(self.answer_sets)

    def __iter__(self):
        return iter(self.answer_sets)


def canonical_order(interpretations):
    unique = {frozenset(i) for i in interpretations}
    return sorted((Interpretation(i) for i in unique), key=lambda i: i.key)


# ---------------------------------------------------------------- oracle


def _candidate_atoms(program: GroundProgram):
    """Atoms that can occur in an answer set.

    Standard head atoms, plus parameters of OR pairs whose positive domain
    atoms are themselves candidates.  Any other atom could be removed from
    an interpretation without breaking closure, so it is never in a minimal
    one (p-stratification rules out circular parameter/domain support).
    """
    cand = set()
    or_pairs = []
    for r in program.rules:
        for m in r.head:
            if isinstance(m, Atom):
                cand.add(m)
            else:
                or_pairs.extend(m.pairs)
    changed = True
    while changed:
        changed = False
        for p in or_pairs:
            if p.parameter.atom not in cand and all(l.atom in cand for l in p.domain if l.positive):
                cand.add(p.parameter.atom)
                changed = True
    return cand


def oracle_answer_sets(program: GroundProgram, bound=DEFAULT_ORACLE_BOUND, limit=None) -> AnswerSetResult:
    """Enumerate answer sets by testing every candidate interpretation against
    the reduct definition.  Facts are always included; the remaining
    candidate atoms are enumerated exhaustively."""
    start = time.perf_counter()
    candidates = _candidate_atoms(program)
    facts = {r.head[0] for r in program.rules if not r.body and len(r.head) == 1 and isinstance(r.head[0], Atom)}
    free = sorted(candidates - facts, key=lambda a: a.key)
    if len(free) > bound:
        raise OracleBoundError(len(free), bound)

    atoms = sorted(program.atoms() | candidates, key=lambda a: a.key)
    bit = {a: 1 << i for i, a in enumerate(atoms)}

    def mask(atoms_):
        m = 0
        for a in atoms_:
            m |= bit[a]
        return m

    compiled = []
    for r in program.rules:
        head = 0
        or_pairs = []
        for m in r.head:
            if isinstance(m, GroundParametric):
                for p in m.pairs:
                    or_pairs.append(
                        (bit[p.parameter.atom], mask(l.atom for l in p.domain if l.positive),
                         mask(l.atom for l in p.domain if not l.positive))
                    )
            else:
                head |= bit[m]
        pos = neg = 0
        and_pairs = []
        for m in r.body:
            if isinstance(m, GroundParametric):
                for p in m.pairs:
                    and_pairs.append(
                        (bit[p.parameter.atom], p.parameter.positive,
                         mask(l.atom for l in p.domain if l.positive),
                         mask(l.atom for l in p.domain if not l.positive))
                    )
            elif m.positive:
                pos |= bit[m.atom]
            else:
                neg |= bit[m.atom]
        compiled.append((head, or_pairs, pos, neg, and_pairs))

    fact_mask = mask(facts)
    free_bits = [bit[a] for a in free]
    found = []
    stats = SolveStats(ground_rules=len(program.rules))

    def closed(reduct, interp):
        return all((body & interp) != body or (head & interp) for head, body in reduct)

    for n in range(1 << len(free_bits)):
        interp = fact_mask
        for i, b in enumerate(free_bits):
            if n >> i & 1:
                interp |= b
        stats.candidates += 1
        reduct = []
        for head, or_pairs, pos, neg, and_pairs in compiled:
            for pb, dp, dn in or_pairs:
                if interp & dp == dp and not interp & dn:
                    head |= pb
            for pb, positive, dp, dn in and_pairs:
                if interp & dp == dp and not interp & dn:
                    if positive:
                        pos |= pb
                    else:
                        neg |= pb
            if neg & interp:
                continue
            reduct.append((head, pos))
        if not closed(reduct, interp):
            continue
        stats.minimality_checks += 1
        forced = 0
        for head, body in reduct:
            if not body and head & (head - 1) == 0:
                forced |= head
        rest = interp & ~forced
        sub = (rest - 1) & rest
        minimal = True
        while True:
            j = sub | forced
            if j != interp and closed(reduct, j):
                minimal = False
                break
            if sub == 0:
                break
            sub = (sub - 1) & rest
        if minimal:
            found.append(frozenset(a for a in atoms if interp & bit[a]))
    answer_sets = canonical_order(found)
    if limit is not None:
        answer_sets = answer_sets[:limit]
    stats.answer_sets = len(answer_sets)
    stats.seconds = time.perf_counter() - start
    return AnswerSetResult(answer_sets, stats)


# ---------------------------------------------------------------- solver


class _Conflict(Exception):
    pass


class _Search:
    """Backtracking model generation over a compiled standard ground program."""

    def __init__(self, program: GroundProgram):
        head_atoms = set()
        for r in program.rules:
            head_atoms.update(r.head)
        self.atoms = sorted(head_atoms, key=lambda a: a.key)
        index = {a: i for i, a in enumerate(self.atoms)}
        self.rules = []
        for r in program.rules:
            pos, neg = [], []
            dead = False
            for lit in r.body:
                i = index.get(lit.atom)
                if i is None:
                    # atoms in no head are false in every answer set
                    if lit.positive:
                        dead = True
                        break
                    continue
                (pos if lit.positive else neg).append(i)
            if not dead:
                self.rules.append((tuple(index[a] for a in r.head), tuple(pos), tuple(neg)))
        n = len(self.atoms)
        self.head_occ = [[] for _ in range(n)]
        self.body_occ = [[] for _ in range(n)]
        for k, (h, p, q) in enumerate(self.rules):
            for a in h:
                self.head_occ[a].append(k)
            for a in p + q:
                self.body_occ[a].append(k)
        self.val = [None] * n
        self.trail = []
        self.stats = SolveStats(ground_rules=len(program.rules))

    # assignment

    def assign(self, atom, value, queue):
        cur = self.val[atom]
        if cur is None:
            self.val[atom] = value
            self.trail.append(atom)
            queue.append(atom)
        elif cur != value:
            raise _Conflict

    def undo(self, mark):
        while len(self.trail) > mark:
            self.val[self.trail.pop()] = None

    def _body_false(self, k):
        _, pos, neg = self.rules[k]
        val = self.val
        return any(val[a] is False for a in pos) or any(val[a] is True for a in neg)

    def _check_rule(self, k, queue):
        head, pos, neg = self.rules[k]
        val = self.val
        if self._body_false(k) or any(val[a] is True for a in head):
            return
        open_body = [(a, True) for a in pos if val[a] is None] + [(a, False) for a in neg if val[a] is None]
        open_head = [a for a in head if val[a] is None]
        if not open_body:
            if not open_head:
                raise _Conflict
            if len(open_head) == 1:
                self.assign(open_head[0], True, queue)
        elif not open_head and len(open_body) == 1:
            a, positive = open_body[0]
            self.assign(a, not positive, queue)

    def _check_support(self, atom, queue):
        val = self.val
        if val[atom] is False:
            return
        support = []
        for k in self.head_occ[atom]:
            head = self.rules[k][0]
            if self._body_false(k) or any(val[a] is True for a in head if a != atom):
                continue
            support.append(k)
            if len(support) > 1:
                return
        if not support:
            if val[atom] is True:
                raise _Conflict
            self.assign(atom, False, queue)
        elif val[atom] is True:
            head, pos, neg = self.rules[support[0]]
            for a in pos:
                self.assign(a, True, queue)
            for a in neg:
                self.assign(a, False, queue)
            for a in head:
                if a != atom:
                    self.assign(a, False, queue)

    def propagate(self, queue):
        rules = self.rules
        while queue:
            atom = queue.pop()
            touched = set(self.head_occ[atom]) | set(self.body_occ[atom])
            for k in sorted(touched):
                self._check_rule(k, queue)
            for k in sorted(touched):
                for a in rules[k][0]:
                    self._check_support(a, queue)

    def initial(self):
        queue = []
        for k in range(len(self.rules)):
            self._check_rule(k, queue)
        for a in range(len(self.atoms)):
            self._check_support(a, queue)
        self.propagate(queue)

    # search

    def _decide(self, atom, value):
        mark = len(self.trail)
        try:
            queue = []
            self.assign(atom, value, queue)
            self.propagate(queue)
            return mark
        except _Conflict:
            self.undo(mark)
            return None

    def _total(self):
        self.stats.candidates += 1
        true = {i for i, v in enumerate(self.val) if v}
        for head, pos, neg in self.rules:
            if all(a in true for a in pos) and not any(a in true for a in neg) and not any(a in true for a in head):
                return None
        interp = frozenset(self.atoms[i] for i in true)
        self.stats.minimality_checks += 1
        reduct = _standard_reduct(self.rules, true, self.atoms)
        if is_minimal_closed(interp, reduct):
            return interp
        return None

    def run(self, limit=None, split_depth=None):
        """Depth-first enumeration.

        Returns answer sets in the order the search meets them.  With
        ``split_depth`` the search stops after that many decisions and the
        result interleaves answer sets with ``_Subtree`` snapshots of the
        open branches, still in depth-first order.
        """
        found = []

        def dfs(depth):
            if limit is not None and len(found) >= limit:
                return
            atom = next((i for i, v in enumerate(self.val) if v is None), None)
            if atom is None:
                model = self._total()
                if model is not None:
                    found.append(model)
                return
            if split_depth is not None and depth == split_depth:
                found.append(_Subtree(list(self.val)))
                return
            for value in (False, True):
                self.stats.choices += 1
                mark = self._decide(atom, value)
                if mark is None:
                    continue
                dfs(depth + 1)
                self.undo(mark)
                if limit is not None and len(found) >= limit:
                    return

        try:
            self.initial()
        except _Conflict:
            return found
        dfs(0)
        return found


@dataclass
class _Subtree:
    snapshot: list


def _standard_reduct(rules, true, atoms):
    out = []
    for head, pos, neg in rules:
        if any(a in true for a in neg):
            continue
        out.append(PositiveRule(frozenset(atoms[a] for a in head), frozenset(atoms[a] for a in pos)))
    return Reduct(tuple(out))


def _solve_subtree(program, snapshot, limit):
    search = _Search(program)
    search.val = list(snapshot)
    search.trail = [i for i, v in enumerate(snapshot) if v is not None]
    return search.run(limit), search.stats


def solve(program: GroundProgram, limit: Optional[int] = None, threads: int = 1, split_depth: int = 3) -> AnswerSetResult:
    """Answer sets of a standard ground program, in canonical order.

    With ``limit`` the first ``limit`` answer sets met by the depth-first
    search are returned (then sorted).  ``threads > 1`` explores the
    subtrees below ``split_depth`` decisions concurrently; the merged
    result is identical to the sequential one.
    """
    if not program.is_standard:
        raise ValueError("solve() needs an expanded program without parametric literals")
    start = time.perf_counter()
    search = _Search(program)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * len(search.atoms) + 1000))
    stats = search.stats
    if threads <= 1:
        found = search.run(limit)
    else:
        items = search.run(None, split_depth=split_depth)
        subtrees = [item.snapshot for item in items if isinstance(item, _Subtree)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = iter(list(pool.map(lambda snap: _solve_subtree(program, snap, limit), subtrees)))
        found = []
        for item in items:
            if isinstance(item, _Subtree):
                sub_found, sub_stats = next(parts)
                found.extend(sub_found)
                stats.choices += sub_stats.choices
                stats.candidates += sub_stats.candidates
                stats.minimality_checks += sub_stats.minimality_checks
            else:
                found.append(item)
    if limit is not None:
        found = found[:limit]
    answer_sets = canonical_order(found)
    stats.answer_sets = len(answer_sets)
    stats.seconds = time.perf_counter() - start
    return AnswerSetResult(answer_sets, stats)
