"""Golden-file cases shared by the CLI tests and the regeneration script.

Run ``python3 tests/golden_cases.py`` from the repository root to rewrite
the ``.out`` files after an intentional output change.
"""

import io
import shlex
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "tests" / "golden"


def cases():
    out = []
    for line in (GOLDEN / "cases.txt").read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        name, code, args = (part.strip() for part in line.split("|"))
        out.append((name, int(code), shlex.split(args)))
    return out


def run_case(args, extra=()):
    """Run the CLI in-process; returns (exit code, stdout text)."""
    from pardlp.cli import build_parser, run, RunConfig

    ns = build_parser().parse_args([*args, *extra])
    names = ns.filter.split(",") if ns.filter else None
    paths = [str(ROOT / p) for p in ns.inputs]
    cfg = RunConfig(paths, ns.mode, ns.max_models, names, ns.maxint, ns.oracle, ns.stats, ns.threads, ns.oracle_bound)
    out, err = io.StringIO(), io.StringIO()
    code = run(cfg, out, err)
    return code, out.getvalue()


if __name__ == "__main__":
    for name, expected, args in cases():
        code, text = run_case(args)
        assert code == expected, (name, code)
        (GOLDEN / f"{name}.out").write_text(text)
        print(f"wrote {name}.out")
