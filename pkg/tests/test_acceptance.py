"""All thirteen acceptance criteria; run with ``pytest -s tests/test_acceptance.py`` to see the report."""
import pytest

from affcluster.verify import CHECKS, run_checks


@pytest.mark.parametrize("number", sorted(CHECKS))
def test_criterion(number):
    (res,) = run_checks([number])
    print(res.line())
    assert res.ok, res.line()
