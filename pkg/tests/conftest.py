import re

_CRITERION = re.compile(r"test_criterion_(\d+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion."""
    status = {}
    for outcome, passed in (("passed", True), ("failed", False), ("error", False)):
        for report in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py" not in report.nodeid:
                continue
            match = _CRITERION.search(report.nodeid)
            if match:
                number = int(match.group(1))
                status[number] = status.get(number, True) and passed
    if not status:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(status):
        verdict = "PASS" if status[number] else "FAIL"
        terminalreporter.write_line(f"criterion {number:02d}: {verdict}")
