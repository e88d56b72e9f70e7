"""Collects acceptance-criterion outcomes and prints one line per criterion."""
import pytest

_results: dict[int, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = dict(report.user_properties).get("criterion")
    if marker is None:
        return
    n, title = marker
    prev = _results.get(n)
    outcome = "PASS" if report.outcome == "passed" else "FAIL"
    if prev and prev[0] == "FAIL":
        outcome = "FAIL"
    _results[n] = (outcome, title, report.duration + (prev[2] if prev else 0.0))


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_setup(item):
    m = item.get_closest_marker("criterion")
    if m is not None:
        item.user_properties.append(("criterion", tuple(m.args)))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        outcome, title, dur = _results[n]
        terminalreporter.write_line(f"criterion {n:2d}: {outcome}  {title}  ({dur:.2f}s)")
