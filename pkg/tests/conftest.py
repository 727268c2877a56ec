import os

import pytest
from hypothesis import HealthCheck, settings

from epdl.model import fixtures as _fixtures

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def fx():
    return _fixtures()


# -- acceptance reporting -----------------------------------------------------

_criteria: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    number = mark.args[0]
    title = mark.kwargs.get("title", item.name)
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        prev = _criteria.get(number)
        ok = rep.outcome == "passed"
        if prev is not None:
            ok = ok and prev[1]
        _criteria[number] = (title, ok, rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok, duration = _criteria[number]
        tr.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}  ({duration:.2f}s)")
