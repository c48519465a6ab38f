"""One line per acceptance criterion, run at the stated tolerances.

Criteria whose target value cannot be reached are left failing on purpose;
the detail line shows the measured value next to the target.
"""

import pytest

from vbs_ge.checks import ACCEPTANCE, INVARIANTS


@pytest.mark.parametrize("check", ACCEPTANCE, ids=lambda c: c.check_name)
def test_criterion(check):
    result = check()
    print(result.line())
    assert result.passed, result.detail


@pytest.mark.parametrize("check", INVARIANTS, ids=lambda c: c.check_name)
def test_invariant(check):
    result = check()
    print(result.line())
    assert result.passed, result.detail
