_LINES = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _LINES.extend(ln for ln in report.capstdout.splitlines() if ln.startswith("["))


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance report")
        for line in _LINES:
            terminalreporter.write_line(line)
