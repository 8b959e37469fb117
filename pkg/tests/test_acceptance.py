"""One test per acceptance criterion, each at its stated tolerance.

A one-line PASS/FAIL summary per criterion is printed in the terminal
summary (section "acceptance criteria").
"""

import pytest

from zeeman_zones.acceptance import run_criterion

RUNTIME_LIMITS = {1: 10.0, 2: 30.0, 8: 60.0, 10: 10.0}


@pytest.mark.parametrize("number", range(1, 12))
def test_criterion(number, acceptance_lines):
    res = run_criterion(number)
    line = res.summary_line()
    acceptance_lines[number] = line
    print(line)
    for check in res.checks:
        print(f"    [{'ok' if check.passed else 'FAIL'}] {check.label}: {check.measured} (target {check.threshold})")
    failed = [f"{c.label}: measured {c.measured}, target {c.threshold}" for c in res.checks if not c.passed]
    assert not failed, "; ".join(failed)
    limit = RUNTIME_LIMITS.get(number)
    if limit is not None:
        assert res.seconds < limit
