"""Regenerate tests/golden/*.out from the current CLI (run from the repo root)."""

import contextlib
import io
from pathlib import Path

from cli_cases import CASES, resolve
from pdcg.cli import main

HERE = Path(__file__).parent


def run(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


if __name__ == "__main__":
    for name, argv in CASES.items():
        code, out = run(resolve(argv, HERE / "fixtures"))
        (HERE / "golden" / f"{name}.out").write_text(f"exit {code}\n{out}")
        print(name, code)
