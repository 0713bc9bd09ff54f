from __future__ import annotations

import io
import subprocess
import sys
from pathlib import Path

import pytest

from cubical.cli import EXIT_OK, EXIT_PARSE, EXIT_TYPE, run

SAMPLES = Path(__file__).resolve().parent.parent / "samples"
PRELUDE = Path(__file__).resolve().parent.parent / "src" / "cubical" / "prelude.cutt"


def cli(*argv: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_normalize_definition():
    code, out, _ = cli("normalize", "--def", "two", str(SAMPLES / "nat.cutt"))
    assert code == EXIT_OK and out.strip() == "suc (suc zero)"


def test_normalize_all_user_definitions():
    code, out, _ = cli("normalize", str(SAMPLES / "nat.cutt"))
    assert code == EXIT_OK
    assert "four = suc (suc (suc (suc zero)))" in out
    assert "idp =" not in out


def test_eval_prints_types():
    code, out, _ = cli("eval", "--def", "four", str(SAMPLES / "nat.cutt"))
    assert code == EXIT_OK and out.strip() == "four : Nat = suc (suc (suc (suc zero)))"


def test_check_prelude_file():
    assert cli("check", str(PRELUDE))[0] == EXIT_OK
    assert cli("check", "--no-prelude", str(PRELUDE))[0] == EXIT_OK


def test_boundary_error_reports_location():
    code, _, err = cli("check", str(SAMPLES / "boundary_error.cutt"))
    assert code == EXIT_TYPE
    assert err.startswith(f"{SAMPLES / 'boundary_error.cutt'}:2:")
    assert ": boundary: " in err


def test_parse_error(tmp_path):
    bad = tmp_path / "bad.cutt"
    bad.write_text("def bad : = ")
    code, _, err = cli("check", str(bad))
    assert code == EXIT_PARSE and f"{bad}:1:" in err and "parse" in err


def test_missing_file(tmp_path):
    code, _, err = cli("check", str(tmp_path / "missing.cutt"))
    assert code == EXIT_PARSE and "io" in err


def test_unknown_definition():
    code, _, err = cli("normalize", "--def", "nope", str(SAMPLES / "nat.cutt"))
    assert code == EXIT_TYPE and "scope" in err


def test_without_prelude_names_are_unbound():
    code, _, err = cli("check", "--no-prelude", str(SAMPLES / "univalence.cutt"))
    assert code == EXIT_TYPE and "scope" in err


def test_univalence_sample_transports():
    code, out, _ = cli("normalize", "--def", "flipped", str(SAMPLES / "univalence.cutt"))
    assert code == EXIT_OK and out.strip() == "inr (suc zero)"
    code, out, _ = cli("normalize", "--def", "zeroBack", str(SAMPLES / "univalence.cutt"))
    assert code == EXIT_OK and out.strip() == "zero"


def test_trace_goes_to_stderr(tmp_path):
    f = tmp_path / "t.cutt"
    f.write_text("def t : Nat = comp 0 (<_> Nat) [] (suc zero)\n")
    code, out, err = cli("normalize", "--trace-comp", "--def", "t", str(f))
    assert code == EXIT_OK and out.strip() == "suc zero"
    assert "comp Nat face=" in err and "depth=0" in err


def test_usage_error():
    with pytest.raises(SystemExit) as exc:
        cli("frobnicate")
    assert exc.value.code == 2


def test_console_script_module():
    proc = subprocess.run([sys.executable, "-m", "cubical", "normalize", "--def", "two",
                           str(SAMPLES / "nat.cutt")], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "suc (suc zero)"


@pytest.mark.parametrize("name", ["nat", "univalence"])
def test_golden_output(name):
    code, out, _ = cli("normalize", str(SAMPLES / f"{name}.cutt"))
    assert code == EXIT_OK
    assert out == (SAMPLES / f"{name}.expected").read_text(encoding="utf-8")


def test_normal_forms_reparse():
    from cubical import syntax as S
    for line in (SAMPLES / "univalence.expected").read_text(encoding="utf-8").splitlines():
        _, rhs = line.split(" = ", 1)
        S.parse_term(rhs)


def test_selftest_output_is_deterministic():
    from cubical.selftest import run_suite
    first = [run_suite(s, 7).line(timed=False) for s in ("dm4", "j", "uniformity")]
    again = [run_suite(s, 7).line(timed=False) for s in ("dm4", "j", "uniformity")]
    assert first == again
