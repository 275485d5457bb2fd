"""Problem encodings, instance generators and brute-force oracles.

Instance vocabulary per encoding:

==================  ==========================  ==================
encoding            input predicates            projection
==================  ==========================  ==================
3col                node/1, edge/2              color/2
ncol-gc             vertex/1, edge/2, color/1   col/2
ncol-param          vertex/1, edge/2, color/1   col/2
hampath, hamcycle   node/1, arc/2, start/1      inPath/2
maxindset-gc        node/1, edge/2              in/1
maxindset-param     node/1, arc/2               in/1
nqueens             row/1, column/1             q/2
==================  ==========================  ==================

Undirected graphs are emitted with both arc directions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional, Sequence

from ..core import Program
from ..frontend import Diagnostic, ProgramError, parse_program
from .oracles import (
    MAX_BOARD,
    MAX_NODES,
    OracleSizeError,
    brute_oracle,
    colorings,
    hamiltonian_paths,
    maximal_independent_sets,
    queen_placements,
)

PROJECTIONS = {
    "3col": ("color",),
    "ncol-gc": ("col",),
    "ncol-param": ("col",),
    "hampath": ("inPath",),
    "hamcycle": ("inPath",),
    "maxindset-gc": ("in",),
    "maxindset-param": ("in",),
    "nqueens": ("q",),
}

ENCODINGS = tuple(PROJECTIONS)


class UnknownEncoding(ProgramError):
    def __init__(self, name):
        super().__init__([Diagnostic("error", "E-NAME", f"unknown encoding {name!r}")])
        self.name = name


@dataclass(frozen=True)
class Encoding:
    name: str
    text: str
    projection: tuple

    @property
    def program(self) -> Program:
        return parse_program(self.text)

    def with_facts(self, facts: str) -> str:
        return self.text + facts


def encoding(name: str) -> Encoding:
    if name not in PROJECTIONS:
        raise UnknownEncoding(name)
    text = resources.files(__package__).joinpath("encodings", f"{name}.lp").read_text()
    return Encoding(name, text, PROJECTIONS[name])


# ---------------------------------------------------------------- generators


@dataclass(frozen=True)
class Graph:
    nodes: tuple
    edges: tuple
    directed: bool = False

    @property
    def arcs(self):
        """Edge list with both directions for undirected graphs, deduplicated."""
        out = list(self.edges)
        if not self.directed:
            out += [(v, u) for u, v in self.edges]
        return tuple(sorted(set(out), key=_pair_key))

    def facts(self, node="node", edge="edge", start=None) -> str:
        lines = [f"{node}({n})." for n in self.nodes]
        lines += [f"{edge}({u},{v})." for u, v in self.arcs]
        if start is not None:
            lines.append(f"start({start}).")
        return "\n".join(lines) + "\n"


def _sort_key(x):
    return (0, x, "") if isinstance(x, int) else (1, 0, str(x))


def _pair_key(p):
    return tuple(map(_sort_key, p))


def gen_graph(nodes, edges=None, *, seed=0, density=0.5, directed=False, labels: Optional[Sequence] = None) -> Graph:
    """A graph on ``nodes`` vertices (labelled 1..n unless ``labels`` given).

    Without explicit ``edges`` each pair (or ordered pair, when directed)
    is included with probability ``density``, drawn from ``random.Random(seed)``.
    """
    if nodes < 1:
        raise ValueError("a graph needs at least one node")
    names = tuple(labels) if labels is not None else tuple(range(1, nodes + 1))
    if len(names) != nodes:
        raise ValueError("label count does not match node count")
    if edges is None:
        rng = random.Random(seed)
        pairs = [(u, v) for i, u in enumerate(names) for j, v in enumerate(names) if (i != j if directed else i < j)]
        edges = [p for p in pairs if rng.random() < density]
    return Graph(names, tuple(tuple(e) for e in edges), directed)


def triangle() -> Graph:
    return gen_graph(3, [(1, 2), (2, 3), (1, 3)])


def complete(n) -> Graph:
    return gen_graph(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


def path_abc() -> Graph:
    return gen_graph(3, [("a", "b"), ("b", "c")], labels="abc")


def gen_colors(k, pred="color") -> str:
    if k < 1:
        raise ValueError("need at least one color")
    return "".join(f"{pred}(c{i}).\n" for i in range(1, k + 1))


def gen_board(n) -> str:
    if n < 1:
        raise ValueError("board size must be positive")
    rows = "".join(f"row({i}).\n" for i in range(1, n + 1))
    return rows + "".join(f"column({i}).\n" for i in range(1, n + 1))


def instance(name: str, graph: Optional[Graph] = None, *, colors=3, n=4, start=None) -> str:
    """Facts for encoding ``name`` in its own vocabulary."""
    if name not in PROJECTIONS:
        raise UnknownEncoding(name)
    if name == "nqueens":
        return gen_board(n)
    if name == "3col":
        return graph.facts("node", "edge")
    if name in ("ncol-gc", "ncol-param"):
        return graph.facts("vertex", "edge") + gen_colors(colors)
    if name == "maxindset-gc":
        return graph.facts("node", "edge")
    if name == "maxindset-param":
        return graph.facts("node", "arc")
    return graph.facts("node", "arc", start=graph.nodes[0] if start is None else start)


def program_text(name: str, graph: Optional[Graph] = None, **kw) -> str:
    return encoding(name).with_facts(instance(name, graph, **kw))


# ---------------------------------------------------------------- solution extraction


def solution(name: str, answer_set):
    """Map an answer set to the brute-oracle solution format."""
    proj = set(PROJECTIONS[name])
    atoms = [a for a in answer_set if a.name in proj]
    vals = [tuple(t.value for t in a.args) for a in atoms]
    if name in ("maxindset-gc", "maxindset-param"):
        return frozenset(v[0] for v in vals)
    return frozenset(vals)


def oracle_for(name: str, graph: Optional[Graph] = None, *, colors=3, n=4, start=None):
    """Brute-force solutions for the instance built by :func:`instance`."""
    if name == "nqueens":
        return brute_oracle("nqueens", n=n)
    if name == "3col":
        return brute_oracle("3col", nodes=graph.nodes, edges=graph.arcs, colors=("r", "y", "g"))
    if name.startswith("ncol"):
        return brute_oracle("ncol", nodes=graph.nodes, edges=graph.arcs, colors=tuple(f"c{i}" for i in range(1, colors + 1)))
    if name.startswith("maxindset"):
        return brute_oracle("maxindset", nodes=graph.nodes, edges=graph.arcs)
    s = graph.nodes[0] if start is None else start
    return brute_oracle(name, nodes=graph.nodes, arcs=graph.arcs, start=s)


# ---------------------------------------------------------------- random rule soups


@dataclass
class SoupShape:
    rules: tuple = (2, 6)
    atoms0: tuple = ("a", "b", "c")
    atoms1: tuple = ("p", "q", "r")
    constants: tuple = (1, 2)
    parametric: float = 0.4


def random_program(seed: int, shape: SoupShape = SoupShape()) -> str:
    """A small random program mixing disjunction, negation and parametric literals.

    Domain predicates ``d/1``, ``e/1`` and ``f/2`` are facts only, so the
    result is always p-stratified and domain-restricted; safety is
    guaranteed by construction as every variable is bound by a positive
    literal. Callers may still run the analyses as a sanity filter.
    """
    rng = random.Random(seed)
    consts = shape.constants
    facts = []
    for c in consts:
        if rng.random() < 0.8:
            facts.append(f"d({c}).")
        if rng.random() < 0.6:
            facts.append(f"e({c}).")
        for c2 in consts:
            if rng.random() < 0.4:
                facts.append(f"f({c},{c2}).")

    def lit0():
        a = rng.choice(shape.atoms0)
        return a if rng.random() < 0.6 else f"not {a}"

    def lit1(var):
        a = f"{rng.choice(shape.atoms1)}({var})"
        return a if rng.random() < 0.6 else f"not {a}"

    def or_set(var):
        dom = "e(Y)" if rng.random() < 0.5 else f"f({var},Y)"
        return f"#or{{{rng.choice(shape.atoms1)}(Y) : {dom}}}"

    def and_set(var):
        dom = "e(Y)" if rng.random() < 0.5 else f"f({var},Y)"
        sign = "" if rng.random() < 0.5 else "not "
        return f"#and{{{sign}{rng.choice(shape.atoms1)}(Y) : {dom}}}"

    rules = []
    for _ in range(rng.randint(*shape.rules)):
        if rng.random() < 0.35:
            head = sorted({rng.choice(shape.atoms0) for _ in range(rng.randint(0, 2))})
            body = [lit0() for _ in range(rng.randint(0 if head else 1, 2))]
            if rng.random() < shape.parametric / 2:
                body.append(and_set(rng.choice(consts)))
        else:
            binder = "d(X)" if rng.random() < 0.5 else f"{rng.choice(shape.atoms1)}(X)"
            head = sorted({f"{rng.choice(shape.atoms1)}(X)" for _ in range(rng.randint(0, 2))})
            if rng.random() < shape.parametric:
                head.append(or_set("X"))
            body = [binder] + [lit1("X") for _ in range(rng.randint(0, 1))]
            if rng.random() < 0.3:
                body.append(lit0())
            if rng.random() < shape.parametric:
                body.append(and_set("X"))
        h = " v ".join(head)
        if body:
            rules.append(f"{h} :- {', '.join(body)}." if h else f":- {', '.join(body)}.")
        else:
            rules.append(f"{h}.")
    return "\n".join(facts + rules) + "\n"


__all__ = [
    "ENCODINGS",
    "Encoding",
    "Graph",
    "MAX_BOARD",
    "MAX_NODES",
    "OracleSizeError",
    "PROJECTIONS",
    "SoupShape",
    "UnknownEncoding",
    "brute_oracle",
    "colorings",
    "complete",
    "encoding",
    "gen_board",
    "gen_colors",
    "gen_graph",
    "hamiltonian_paths",
    "instance",
    "maximal_independent_sets",
    "oracle_for",
    "path_abc",
    "program_text",
    "queen_placements",
    "random_program",
    "solution",
    "triangle",
]
