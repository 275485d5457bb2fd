import pytest

from conftest import solve_text
from pardlp.corpus import (
    ENCODINGS,
    OracleSizeError,
    UnknownEncoding,
    brute_oracle,
    complete,
    encoding,
    gen_board,
    gen_colors,
    gen_graph,
    oracle_for,
    path_abc,
    program_text,
    random_program,
    solution,
    triangle,
)
from pardlp.core import Atom, ParametricLiteral
from pardlp.frontend import parse_program


def test_rule_counts():
    assert len(encoding("3col").program.rules) == 2
    assert len(encoding("maxindset-param").program.rules) == 1
    nq = encoding("nqueens").program.rules
    assert len(nq) == 4
    assert isinstance(nq[0].head[0], ParametricLiteral)
    assert all(r.is_constraint for r in nq[1:])


def test_3col_shape():
    guess, check = encoding("3col").program.rules
    assert len(guess.head) == 3 and check.is_constraint


def test_hampath_variants():
    path = encoding("hampath").text
    cycle = encoding("hamcycle").text
    assert ":- start(Y), inPath(_,Y)." in path
    assert "not start(X)" in path and "not start(X)" not in cycle


def test_unknown_encoding():
    with pytest.raises(UnknownEncoding) as exc:
        encoding("sudoku")
    assert exc.value.diagnostics[0].code == "E-NAME"


def test_graph_shapes():
    assert len(triangle().edges) == 3 and triangle().nodes == (1, 2, 3)
    assert len(complete(4).edges) == 6
    assert path_abc().edges == (("a", "b"), ("b", "c"))


def test_graph_facts_are_symmetric():
    facts = path_abc().facts("node", "arc")
    assert "arc(a,b)." in facts and "arc(b,a)." in facts
    assert facts.count("node(") == 3


def test_random_graph_is_deterministic():
    assert gen_graph(6, seed=5, density=0.4) == gen_graph(6, seed=5, density=0.4)
    assert gen_graph(6, seed=5, density=0.0).edges == ()
    assert len(gen_graph(4, density=1.0).edges) == 6
    assert len(gen_graph(4, density=1.0, directed=True).edges) == 12


def test_gen_colors():
    assert gen_colors(3) == "color(c1).\ncolor(c2).\ncolor(c3).\n"


def test_gen_board():
    facts = parse_program(gen_board(4))
    assert len(facts.rules) == 8
    assert gen_board(1) == "row(1).\ncolumn(1).\n"


def test_generators_reject_empty():
    with pytest.raises(ValueError):
        gen_graph(0)
    with pytest.raises(ValueError):
        gen_colors(0)


def test_oracle_counts():
    tri = triangle()
    assert len(brute_oracle("ncol", nodes=tri.nodes, edges=tri.edges, colors=("r", "g", "b"))) == 6
    pabc = path_abc()
    assert brute_oracle("maxindset", nodes=pabc.nodes, edges=pabc.edges) == {frozenset("ac"), frozenset("b")}
    assert len(brute_oracle("nqueens", n=4)) == 2


def test_oracle_size_limit():
    with pytest.raises(OracleSizeError):
        brute_oracle("nqueens", n=7)
    with pytest.raises(OracleSizeError):
        brute_oracle("maxindset", nodes=range(9), edges=[])


@pytest.mark.parametrize("name", [n for n in ENCODINGS if n != "nqueens"])
@pytest.mark.parametrize("seed", range(4))
def test_encodings_match_brute_force(name, seed):
    graph = gen_graph(5, seed=seed, density=0.5, directed=name.startswith("ham"))
    result = solve_text(program_text(name, graph, colors=3))
    got = [solution(name, a) for a in result]
    assert len(set(got)) == len(got)
    assert set(got) == oracle_for(name, graph, colors=3)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_nqueens_matches_brute_force(n):
    result = solve_text(program_text("nqueens", n=n))
    assert {solution("nqueens", a) for a in result} == oracle_for("nqueens", n=n)


def test_random_programs_are_deterministic_and_parse():
    assert random_program(11) == random_program(11)
    for seed in range(30):
        parse_program(random_program(seed))
