import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


import pytest

# acceptance criterion number -> {"title": str, "parts": [(test name, ok, note)]}
_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.fixture
def detail(request):
    """Attach a measured value to the criterion line of the current test."""
    def note(text):
        request.node.user_properties.append(("detail", text))
    return note


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    # only the call phase, or a setup phase that never reached the call
    if rep.when != "call" and not (rep.when == "setup" and not rep.passed):
        return
    number, title = marker.args
    entry = _CRITERIA.setdefault(number, {"title": title, "parts": []})
    notes = [v for k, v in item.user_properties if k == "detail"]
    if hasattr(rep, "wasxfail"):
        entry["parts"].append((item.name, False, f"known failure: {rep.wasxfail}"))
    else:
        entry["parts"].append((item.name, rep.passed, "; ".join(notes)))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        ok = all(p[1] for p in entry["parts"])
        notes = [f"{name}: {note}" for name, good, note in entry["parts"] if note and (not good or ok)]
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {entry['title']}"
        tr.write_line(line)
        for n in notes:
            tr.write_line(f"    {n}")
