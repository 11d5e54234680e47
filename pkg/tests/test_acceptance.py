"""Acceptance criteria, one test and one PASS/FAIL line each.

Run directly (``python3 tests/test_acceptance.py``) for the bare report.
"""
import sys
import time

import pytest

from abslinf.acceptance import CRITERIA, run_all


@pytest.mark.parametrize("idx", range(len(CRITERIA)), ids=[n.replace(" ", "_") for n, _ in CRITERIA])
def test_criterion(idx, capsys):
    name, fn = CRITERIA[idx]
    t = time.time()
    ok, detail = fn()
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] {idx + 1:2d}. {name}: {detail} ({time.time() - t:.1f}s)")
    assert ok, detail


if __name__ == "__main__":
    sys.exit(0 if run_all() else 1)
