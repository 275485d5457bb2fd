"""Exhaustive problem oracles, independent of the interpreter.

Each oracle enumerates candidate solutions directly and returns them as a
frozenset of canonical solution descriptions, so callers can compare both
the count and the content with projected answer sets.
"""

from __future__ import annotations

import itertools

MAX_NODES = 8
MAX_BOARD = 6


class OracleSizeError(ValueError):
    code = "E-SIZE"


def _check_nodes(nodes):
    if len(nodes) > MAX_NODES:
        raise OracleSizeError(f"brute oracle limited to {MAX_NODES} nodes, got {len(nodes)}")


def colorings(nodes, edges, colors):
    """All proper colorings as frozensets of (node, color)."""
    _check_nodes(nodes)
    nodes = list(nodes)
    result = set()
    for assignment in itertools.product(colors, repeat=len(nodes)):
        color_of = dict(zip(nodes, assignment))
        if any(u != v and color_of[u] == color_of[v] for u, v in edges):
            continue
        result.add(frozenset(color_of.items()))
    return frozenset(result)


def maximal_independent_sets(nodes, edges):
    _check_nodes(nodes)
    nodes = list(nodes)
    adjacent = {(u, v) for u, v in edges} | {(v, u) for u, v in edges}

    def independent(subset):
        return not any((u, v) in adjacent for u in subset for v in subset)

    result = set()
    for mask in range(1 << len(nodes)):
        chosen = {n for i, n in enumerate(nodes) if mask >> i & 1}
        if not independent(chosen):
            continue
        if any(independent(chosen | {n}) for n in nodes if n not in chosen):
            continue
        result.add(frozenset(chosen))
    return frozenset(result)


def queen_placements(n):
    """All attack-free placements, one queen per row, as frozensets of (row, col)."""
    if n > MAX_BOARD:
        raise OracleSizeError(f"brute oracle limited to boards of size {MAX_BOARD}, got {n}")
    result = set()
    for cols in itertools.product(range(1, n + 1), repeat=n):
        queens = list(enumerate(cols, start=1))
        ok = True
        for (r1, c1), (r2, c2) in itertools.combinations(queens, 2):
            if c1 == c2 or abs(r1 - r2) == abs(c1 - c2):
                ok = False
                break
        if ok:
            result.add(frozenset(queens))
    return frozenset(result)


def hamiltonian_paths(nodes, arcs, start, cycle=False):
    """Directed Hamiltonian paths from ``start`` as frozensets of arcs.

    With ``cycle=True`` the closing arc back to ``start`` is required and
    included in the returned arc set.
    """
    _check_nodes(nodes)
    arcs = set(arcs)
    rest = [n for n in nodes if n != start]
    result = set()
    for order in itertools.permutations(rest):
        path = (start,) + order
        steps = list(zip(path, path[1:]))
        if not all(step in arcs for step in steps):
            continue
        if cycle:
            closing = (path[-1], start)
            if len(path) == 1 or closing not in arcs:
                continue
            steps.append(closing)
        result.add(frozenset(steps))
    return frozenset(result)


def brute_oracle(problem, **instance):
    """Dispatch by problem family name; returns the solution set."""
    if problem in ("ncol", "3col"):
        return colorings(instance["nodes"], instance["edges"], instance["colors"])
    if problem == "maxindset":
        return maximal_independent_sets(instance["nodes"], instance["edges"])
    if problem == "nqueens":
        return queen_placements(instance["n"])
    if problem == "hampath":
        return hamiltonian_paths(instance["nodes"], instance["arcs"], instance["start"])
    if problem == "hamcycle":
        return hamiltonian_paths(instance["nodes"], instance["arcs"], instance["start"], cycle=True)
    raise KeyError(f"unknown problem family {problem!r}")
