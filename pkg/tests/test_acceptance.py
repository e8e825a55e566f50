"""Acceptance criteria, one test per criterion.

Each test runs the seeded suite at the stated tolerance, prints a single
PASS/FAIL line (visible with ``-s``) and asserts the outcome.
"""

import pytest

from hardyops import suites

TIME_LIMIT = 60.0

# criterion number -> (suite name, minimum number of corpus cases)
CRITERIA = {
    1: ("identities", 2 * 50),
    2: ("defect_ground_truths", 20),
    3: ("theorem_vs_generic", 20),
    4: ("hitt_sarason", 10),
    5: ("perturbation", 20),
    6: ("equivalence", 20),
    7: ("kernels", 20),
    8: ("structural", 20),
    9: ("operator_sums", 20),
}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    name, minimum = CRITERIA[number]
    result = suites.SUITES[name](suites.DEFAULT_SEED)
    with capsys.disabled():
        print(f"\n[criterion {number}] {result.line()}")
        for case in result.failures[:5]:
            print(f"    failed: {case.label} residual={case.residual:.3g} {case.detail}")
    assert len(result.cases) >= minimum
    assert result.seconds <= TIME_LIMIT
    assert result.passed
