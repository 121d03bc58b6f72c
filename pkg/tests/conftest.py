import time

import pytest

_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None and rep.when == "call":
        num, text = mark.args
        detail = "; ".join(v for k, v in item.user_properties if k == "detail")
        _criteria.append((num, text, rep.outcome, rep.duration, detail))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num, text, outcome, dur, detail in sorted(_criteria):
        status = "PASS" if outcome == "passed" else "FAIL"
        extra = f" | {detail}" if detail else ""
        terminalreporter.write_line(f"[{status}] criterion {num:>2}: {text} ({dur:.1f}s){extra}")


@pytest.fixture
def report(request):
    """Attach a measured value to the acceptance summary line."""
    return lambda text: request.node.user_properties.append(("detail", text))


@pytest.fixture
def timer():
    start = time.perf_counter()
    return lambda: time.perf_counter() - start
