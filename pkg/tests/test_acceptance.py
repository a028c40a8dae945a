"""Acceptance suite: each criterion runs at its stated tolerance and budget.

The criteria live in proofbench.regress so the CLI `regress` verb and this
module stay in lockstep; here each one is asserted and its pass/fail line
printed.
"""

import random

import pytest

from proofbench import regress


@pytest.mark.parametrize("number", range(1, 10))
def test_criterion(number):
    criterion = regress.CRITERIA[number - 1]
    result = criterion(random.Random(number))
    print(regress.format_result(result))
    assert result.ok, f"criterion {number} failed: {result.details}"
    assert result.seconds < result.limit, (
        f"criterion {number} exceeded its time budget: {result.seconds:.1f}s"
        f" >= {result.limit:.0f}s"
    )
