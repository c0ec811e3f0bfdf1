"""Shared fixtures plus the acceptance summary hook.

Tests marked @pytest.mark.criterion("...") report one PASS/FAIL line each
in a terminal section after the run, so the acceptance status is readable
without scrolling through the full test list.
"""

import pytest

from storyboarder.corpus import fixture_names, load_fixture

_acceptance: list[tuple[str, bool]] = []


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(label): acceptance criterion the test enforces"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        _acceptance.append((marker.args[0], report.passed))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed in _acceptance:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label}")


@pytest.fixture(scope="session")
def corpus():
    """Every bundled fixture, parsed once."""
    return {name: load_fixture(name) for name in fixture_names()}
