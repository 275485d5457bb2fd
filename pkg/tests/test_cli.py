import io
import subprocess
import sys

import pytest

from golden_cases import GOLDEN, ROOT, cases, run_case
from pardlp.cli import RunConfig, main, print_stats, run
from pardlp.engine import AnswerSetResult

PROGRAMS = ROOT / "tests" / "programs"


def run_text(tmp_path, text, **kw):
    path = tmp_path / "prog.lp"
    path.write_text(text)
    out, err = io.StringIO(), io.StringIO()
    code = run(RunConfig([str(path)], **kw), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("name, expected, args", cases(), ids=[c[0] for c in cases()])
def test_golden(name, expected, args):
    code, text = run_case(args)
    assert code == expected
    assert text == (GOLDEN / f"{name}.out").read_text()


def test_disjunction(tmp_path):
    code, out, _ = run_text(tmp_path, "a v b v c.")
    assert (code, out) == (0, "{a}\n{b}\n{c}\n")


def test_unsafe_rule_exit_2(tmp_path):
    code, out, err = run_text(tmp_path, "p(X,Z) :- #and{q(X,Y) : a(X)}, s(X,Z).")
    assert code == 2 and out == ""
    assert err.startswith("error E-SAFE 1:1 ") and "variable Y" in err


def test_incoherent(tmp_path):
    code, out, _ = run_text(tmp_path, "p(1).\n#or{b(X) : a(X)}.")
    assert (code, out) == (1, "INCOHERENT\n")


def test_parse_error_exit_2(tmp_path):
    code, _, err = run_text(tmp_path, "p(1")
    assert code == 2 and "E-PARSE" in err


def test_missing_file():
    err = io.StringIO()
    assert run(RunConfig(["/nonexistent/x.lp"]), io.StringIO(), err) == 2
    assert "E-IO" in err.getvalue()


def test_check_mode(tmp_path):
    code, out, err = run_text(tmp_path, "a v b.", mode="check", stats=True)
    assert (code, out, err) == (0, "", "")


def test_domain_violation_and_oracle_override(tmp_path):
    text = "b(1) v b(2).\n#or{p(X) : b(X)} :- b(1).\n"
    code, _, err = run_text(tmp_path, text)
    assert code == 2 and "error E-DOMAIN" in err
    code, out, err = run_text(tmp_path, text, oracle=True)
    assert code == 0 and "warning E-DOMAIN" in err
    assert out.splitlines() == ["{b(1), p(1)}", "{b(2)}"]


def test_oracle_bound_exit_3(tmp_path):
    text = " ".join(f"p{i} v q{i}." for i in range(4))
    code, _, err = run_text(tmp_path, text, oracle=True, oracle_bound=5)
    assert code == 3 and "E-ORACLE-BOUND" in err


def test_maxint_exit_3(tmp_path):
    code, _, err = run_text(tmp_path, "n(3).\nm(Z) :- n(X), Z = X + X.", maxint=4)
    assert code == 3 and "E-MAXINT" in err


def test_filter_keeps_count(tmp_path):
    code, out, err = run_text(tmp_path, "a v b.\nc.", filter=["c", "zz"])
    assert out == "{c}\n{c}\n"
    assert "W-FILTER" in err and "zz" in err


def test_max_models(tmp_path):
    code, out, _ = run_text(tmp_path, "a v b v c.", max_models=2)
    assert code == 0 and len(out.splitlines()) == 2


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig(["x"], max_models=0)
    with pytest.raises(ValueError):
        RunConfig(["x"], mode="explain")


def test_files_concatenate(tmp_path):
    (tmp_path / "enc.lp").write_text("#or{col(X,C) : color(C)} :- vertex(X).\n")
    (tmp_path / "inst.lp").write_text("vertex(1). color(r). color(g).\n")
    out = io.StringIO()
    code = run(RunConfig([str(tmp_path / "enc.lp"), str(tmp_path / "inst.lp")], filter=["col"]), out, io.StringIO())
    assert code == 0 and out.getvalue() == "{col(1,g)}\n{col(1,r)}\n"


def test_arity_clash_across_files(tmp_path):
    (tmp_path / "a.lp").write_text("p(1).\n")
    (tmp_path / "b.lp").write_text("p(1,2).\n")
    err = io.StringIO()
    assert run(RunConfig([str(tmp_path / "a.lp"), str(tmp_path / "b.lp")]), io.StringIO(), err) == 2
    assert "E-ARITY" in err.getvalue()


def test_stats(tmp_path):
    code, _, err = run_text(tmp_path, "f(1). f(2).", stats=True)
    keys = [line.split(":")[0] for line in err.splitlines()]
    assert keys == ["ground_rules", "choices", "candidates", "minimality_checks", "answer_sets", "time"]
    assert "candidates: 1" in err and "choices: 0" in err


def test_stats_triangle(tmp_path):
    text = (ROOT / "src/pardlp/corpus/encodings/ncol-param.lp").read_text()
    text += (ROOT / "src/pardlp/corpus/instances/triangle-3colors.lp").read_text()
    _, _, err = run_text(tmp_path, text, stats=True)
    assert "answer_sets: 6" in err


def test_stats_empty_without_result():
    assert print_stats(None) == ""
    assert print_stats(AnswerSetResult()).startswith("ground_rules: 0\n")


def test_main_entry_point(capsys):
    assert main([str(PROGRAMS / "abc-cycle.lp")]) == 0
    assert capsys.readouterr().out == "{b, c}\n"


def test_module_invocation():
    proc = subprocess.run(
        [sys.executable, "-m", "pardlp", "--mode=ground", str(PROGRAMS / "grounding.lp")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "p(2) v p(3) v p(4).\n" in proc.stdout


def test_output_is_byte_identical_across_thread_counts():
    for name, expected, args in cases():
        assert run_case(args) == run_case(args, ["--threads", "4"])
