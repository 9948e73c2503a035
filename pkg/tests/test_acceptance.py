"""Acceptance criteria, each checked at its stated tolerance.

One ``geocoh reproduce`` run (a subprocess, so the exit code and wall time
are real) produces the report; every test below re-reads its criterion,
prints a PASS/FAIL line and asserts.
"""
import json
import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES


@pytest.fixture(scope="session")
def report(tmp_path_factory):
    out = tmp_path_factory.mktemp("acceptance") / "reproduce.json"
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "geocoh", "reproduce", "--output", str(out)],
                          capture_output=True, text=True)
    wall = time.perf_counter() - t0
    doc = json.loads(out.read_text()) if out.exists() else {"criteria": [], "multicopy_table": []}
    doc["returncode"], doc["wall_s"], doc["stderr"] = proc.returncode, wall, proc.stderr
    return doc


def criterion(report, cid):
    return next(c for c in report["criteria"] if c["id"] == cid)


def verdict(cid, name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {cid:2d} {name}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def tolerance_verdict(report, cid, tol, extra_ok=True, extra=""):
    c = criterion(report, cid)
    ok = c["passed"] and c["worst"] <= tol and extra_ok
    verdict(cid, c["name"], ok, f"worst={c['worst']:.3g} tol={tol:g} n={c['samples']}{extra}")


def test_qubit_closed_form(report):
    c = criterion(report, 1)
    tolerance_verdict(report, 1, 1e-7, c["samples"] == 1000 and c["elapsed_s"] < 5.0,
                      f" time={c['elapsed_s']:.2f}s (budget 5s)")


def test_worked_example(report):
    c = criterion(report, 2)
    rows = c["extra"]["rows"]
    at_pi8 = next(r["success"] for r in rows if abs(r["theta"] - np.pi / 8) < 1e-12)
    ok = c["extra"]["overlap_residual"] <= 1e-7 and abs(at_pi8 - 0.8535533906) < 1e-9 and len(rows) == 4
    tolerance_verdict(report, 2, 1e-9, ok,
                      f" overlap={c['extra']['overlap_residual']:.3g} success(pi/8)={at_pi8:.10f}")


def test_helstrom_oracle(report):
    tolerance_verdict(report, 3, 1e-6, criterion(report, 3)["samples"] == 200)


def test_x_block(report):
    tolerance_verdict(report, 4, 1e-6, criterion(report, 4)["samples"] == 100)


def test_bound_chain(report):
    c = criterion(report, 5)
    margin = c["extra"]["min_l1_minus_l3"]
    tolerance_verdict(report, 5, 1e-7, margin > 0 and c["samples"] == 200, f" min(l1-l3)={margin:.3g}")


def test_duality(report):
    tolerance_verdict(report, 6, 1e-6, criterion(report, 6)["samples"] == 200)


def test_equivalence(report):
    c = criterion(report, 7)
    ok = c["extra"]["equivalence"] <= 1e-6 and c["extra"]["cross_solver"] <= 1e-6
    tolerance_verdict(report, 7, 1e-6, ok, f" cross_solver={c['extra']['cross_solver']:.3g}")


def test_alignment(report):
    c = criterion(report, 8)
    ok = c["extra"]["direct"] <= 1e-8 and c["extra"]["conjugate"] <= 1e-8
    tolerance_verdict(report, 8, 1e-8, ok, f" conjugate={c['extra']['conjugate']:.3g}")


def test_multicopy(report):
    table = report["multicopy_table"]
    err = np.array([row["gso_error"] for row in table])
    cg_gap = max((row["c_g"] - row["l4"] for row in table), default=np.inf)
    ok = (len(table) == 50 and np.all(np.diff(err) <= 1e-15) and err[-1] <= 1e-6
          and cg_gap <= 1e-9)
    tolerance_verdict(report, 9, 1e-6, ok,
                      f" gso_error(n=50)={err[-1] if len(err) else np.nan:.3g} max(c_g-c_l1/2)={cg_gap:.3g}")


def test_dependent(report):
    tolerance_verdict(report, 10, 1e-6, criterion(report, 10)["samples"] == 100)


def test_runtime_and_exit_code(report):
    ok = report["returncode"] == 0 and report["wall_s"] < 60.0 and criterion(report, 11)["passed"]
    verdict(11, "full suite runtime", ok,
            f"wall={report['wall_s']:.1f}s (budget 60s) exit={report['returncode']}")
