import pytest

from pqmkz.pq_core import PQParams

# Parameter pairs exercised throughout the suite.
TEST_PARAMS = [PQParams(1.0, 0.9), PQParams(0.95, 0.9), PQParams(0.9, 0.8), PQParams(0.9, 0.5)]
MOMENT_PARAMS = TEST_PARAMS[:3]

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(params=TEST_PARAMS, ids=lambda pr: f"p{pr.p:g}-q{pr.q:g}")
def params(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
