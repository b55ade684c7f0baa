"""Prints one PASS/FAIL line per acceptance criterion after the run."""

_MARKER = "test_acceptance.py::test_criterion_"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if _MARKER not in nodeid or getattr(report, "when", "call") != "call":
                continue
            number = int(nodeid.split("test_criterion_")[1].split("_")[0])
            outcomes[number] = "PASS" if report.passed else "FAIL"
    if outcomes:
        terminalreporter.write_sep("-", "acceptance criteria")
        for number in sorted(outcomes):
            terminalreporter.write_line(f"CRITERION {number}: {outcomes[number]}")
