import os

# the all-pattern k <= 1e9 count is skipped on the pure-Python backend unless set
LONG = os.environ.get("DIVPAIRS_LONG") == "1"
STRETCH = os.environ.get("DIVPAIRS_STRETCH") == "1"

# criterion number -> (status, summary); filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        status, text = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:>2}: {status:<4}  {text}")
