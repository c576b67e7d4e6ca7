import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_CRITERIA: dict = {}


@pytest.fixture
def criterion(request):
    """Record a pass/fail line for an acceptance criterion, printed in the terminal summary."""
    def record(number: int, title: str):
        _CRITERIA[number] = (title, request.node)
    return record


def pytest_runtest_makereport(item, call):
    if call.when != "call":
        return
    for num, (title, node) in list(_CRITERIA.items()):
        if node is item:
            ok = call.excinfo is None
            reason = "" if ok else str(call.excinfo.value).splitlines()[0][:200]
            _CRITERIA[num] = (title, ("PASS", "") if ok else ("FAIL", reason))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, status = _CRITERIA[num]
        if not isinstance(status, tuple):
            status = ("NOT RUN", "")
        terminalreporter.write_line(f"criterion {num}: {status[0]:4}  {title}")
        if status[1]:
            terminalreporter.write_line(f"    {status[1]}")
