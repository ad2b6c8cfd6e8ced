"""Acceptance reporting: one PASS/FAIL line per criterion after the run."""
import time

import pytest

SUITE_LIMIT_S = 60.0
_results = {}
_start = time.perf_counter()


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    key = props["criterion"]
    if report.when == "call" or report.outcome != "passed":
        _results[key] = (props.get("title", ""), report.outcome, report.duration)


def pytest_sessionfinish(session, exitstatus):
    session.config._suite_elapsed = time.perf_counter() - _start
    if _results and session.config._suite_elapsed >= SUITE_LIMIT_S:
        session.exitstatus = pytest.ExitCode.TESTS_FAILED


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key in sorted(_results):
        title, outcome, duration = _results[key]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        tr.write_line(f"{verdict}  criterion {key}: {title} ({duration:.2f}s)")
    elapsed = getattr(config, "_suite_elapsed", time.perf_counter() - _start)
    verdict = "PASS" if elapsed < SUITE_LIMIT_S else "FAIL"
    tr.write_line(f"{verdict}  criterion 7b: total suite wall time {elapsed:.1f}s < {SUITE_LIMIT_S:.0f}s")
