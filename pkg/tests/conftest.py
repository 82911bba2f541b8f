import pytest

from egspin import _backend


@pytest.fixture(params=sorted(_backend.AVAILABLE))
def kernels(request):
    """Each kernel backend that is importable in this environment."""
    return _backend.AVAILABLE[request.param]


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import REPORT

    if not REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(REPORT):
        terminalreporter.write_line(REPORT[number])
