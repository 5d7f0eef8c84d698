"""Acceptance criteria at their stated tolerances; one PASS/FAIL line per criterion.

Slow (tens of minutes on one core). Deselect with ``-m "not acceptance"``.
"""
import pytest

from kaclab.acceptance import CRITERIA, AcceptanceContext, run_criterion

RESULTS = []


@pytest.fixture(scope="module")
def ctx(tmp_path_factory):
    return AcceptanceContext(tmp_path_factory.mktemp("acceptance"), seed=0, workers=1)


@pytest.mark.acceptance
@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, ctx, capsys):
    res = run_criterion(number, ctx)
    RESULTS.append(res.line())
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.line()
