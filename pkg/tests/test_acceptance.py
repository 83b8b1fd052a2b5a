"""Acceptance suite: one PASS/FAIL line per criterion.

Run under pytest (the lines are printed in the terminal summary) or directly
with ``python3 tests/test_acceptance.py``.
"""

import subprocess
import sys
import time

import pytest

from qellr.verify import CRITERIA, run_suite

# seconds; criteria without a stated budget only need to finish
BUDGETS = {1: 60, 2: 30, 3: 10, 6: 30, 7: 120}
REPORT = []


def report(cid, name, ok, elapsed, note=""):
    line = f"criterion {cid} {name:<22} {'PASS' if ok else 'FAIL'} {elapsed:7.2f}s {note}".rstrip()
    REPORT.append(line)
    print(line)


def verify_cli(*flags):
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "qellr", "verify", *flags],
                          capture_output=True, timeout=900)
    return proc, time.perf_counter() - t0


@pytest.mark.parametrize("cid,name", [(cid, name) for cid, name, _ in CRITERIA if cid != 9])
def test_criterion(cid, name):
    t0 = time.perf_counter()
    res = run_suite(quick=False, only={cid}, log=None)
    elapsed = time.perf_counter() - t0
    row = res["criteria"][0]
    budget = BUDGETS.get(cid)
    in_time = budget is None or elapsed < budget
    report(cid, name, row["pass"] and in_time, elapsed, f"(budget {budget}s)" if budget else "")
    assert row["pass"], row["detail"]
    assert in_time, f"{elapsed:.1f}s exceeds the {budget}s budget"


def test_criterion_9_verify_reports_are_byte_identical():
    first, t1 = verify_cli()
    second, t2 = verify_cli()
    ok = first.returncode == second.returncode == 0 and first.stdout == second.stdout
    report(9, "determinism", ok, t1 + t2, "(two full verify runs)")
    assert first.returncode == 0, first.stderr.decode()[-2000:]
    assert first.stdout == second.stdout


def test_quick_verify_under_a_minute():
    proc, elapsed = verify_cli("--quick")
    assert proc.returncode == 0
    assert elapsed < 60


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
