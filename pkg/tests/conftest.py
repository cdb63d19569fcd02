import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter):
    verdicts = []
    for outcome in ("passed", "failed"):
        for report in terminalreporter.stats.get(outcome, []):
            match = _CRITERION.search(report.nodeid)
            if match and report.when == "call":
                verdicts.append((int(match.group(1)), outcome, match.group(2)))
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for number, outcome, name in sorted(verdicts):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict} criterion {number}: {name.replace('_', ' ')}")
