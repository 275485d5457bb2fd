import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from pardlp.engine import oracle_answer_sets, solve
from pardlp.frontend import parse_program
from pardlp.grounder import ground_program, instantiate

PROGRAMS = Path(__file__).resolve().parent / "programs"


def solve_text(text, **kw):
    return solve(ground_program(parse_program(text)), **kw)


def oracle_text(text, **kw):
    return oracle_answer_sets(instantiate(parse_program(text)), **kw)


def as_strings(result):
    return [str(a) for a in result.answer_sets]


@pytest.fixture
def program_file():
    def load(name):
        return (PROGRAMS / name).read_text()

    return load


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
