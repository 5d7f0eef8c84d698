import pytest

from kaclab.laws import parse_law


@pytest.fixture(params=["gaussian", "rademacher", "uniform_sym", "three_point:q0=0.5"])
def law(request):
    return parse_law(request.param)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
