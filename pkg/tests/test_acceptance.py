"""Acceptance criteria, one printed PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py` or directly with
`python3 tests/test_acceptance.py`.
"""

from __future__ import annotations

import subprocess
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import pytest

from cubical.selftest import SuiteResult, run_suite

SEED = 0
ROOT = Path(__file__).resolve().parent.parent
PRELUDE = ROOT / "src" / "cubical" / "prelude.cutt"


@dataclass(frozen=True)
class Outcome:
    name: str
    ok: bool
    detail: str
    seconds: float
    budget: float | None

    def line(self) -> str:
        within = self.budget is None or self.seconds < self.budget
        status = "PASS" if self.ok and within else "FAIL"
        limit = f" (limit {self.budget:.0f}s)" if self.budget is not None else ""
        return f"{status} {self.name}: {self.detail}; {self.seconds:.2f}s{limit}"

    @property
    def passed(self) -> bool:
        return self.ok and (self.budget is None or self.seconds < self.budget)


def _suites(name: str, suites: list[str], budget: float | None,
            expect: dict[str, int] | None = None) -> Outcome:
    results: list[SuiteResult] = [run_suite(s, SEED) for s in suites]
    ok = all(r.ok for r in results)
    if expect:
        ok = ok and all(r.total >= expect.get(r_name, 0)
                        for r, r_name in zip(results, suites))
    detail = ", ".join(f"{s} {r.passed}/{r.total}" for s, r in zip(suites, results))
    for r in results:
        for f in r.failures[:3]:
            detail += f"\n    {f[:300]}"
    return Outcome(name, ok, detail, sum(r.seconds for r in results), budget)


def dm4_oracle() -> Outcome:
    return _suites("DM4 oracle", ["dm4"], 5.0, {"dm4": 1000})


def face_oracle() -> Outcome:
    return _suites("face oracle and forall adjunction", ["faces", "forall"], 10.0)


def composition_contracts() -> Outcome:
    return _suites("composition contracts", ["compositions"], 30.0, {"compositions": 500})


def uniformity() -> Outcome:
    return _suites("uniformity", ["uniformity"], None, {"uniformity": 200})


def j_computation() -> Outcome:
    return _suites("J computation on refl", ["j"], None, {"j": 50})


def strict_glue() -> Outcome:
    return _suites("strict glue and adaptation", ["glue", "adaptation"], None,
                   {"glue": 100, "adaptation": 50})


def univalence_pipeline() -> Outcome:
    start = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "cubical", "check", str(PRELUDE)],
                          capture_output=True, text=True)
    suite = run_suite("univalence", SEED)
    seconds = time.perf_counter() - start
    ok = proc.returncode == 0 and suite.ok
    detail = f"prelude check exit {proc.returncode}, pipeline {suite.passed}/{suite.total}"
    for f in suite.failures[:3]:
        detail += f"\n    {f[:300]}"
    return Outcome("univalence pipeline", ok, detail, seconds, 10.0)


def whole_selftest() -> Outcome:
    start = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "cubical", "selftest", "--seed", str(SEED)],
                          capture_output=True, text=True)
    seconds = time.perf_counter() - start
    return Outcome("selftest --seed 0", proc.returncode == 0,
                   f"exit {proc.returncode}", seconds, 60.0)


CRITERIA = [dm4_oracle, face_oracle, composition_contracts, uniformity, j_computation,
            strict_glue, univalence_pipeline, whole_selftest]


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: c.__name__)
def test_criterion(criterion, capsys):
    outcome = criterion()
    with capsys.disabled():
        print("\n" + outcome.line())
    assert outcome.passed, outcome.line()


if __name__ == "__main__":
    outcomes = []
    for c in CRITERIA:
        o = c()
        print(o.line(), flush=True)
        outcomes.append(o)
    sys.exit(0 if all(o.passed for o in outcomes) else 1)
