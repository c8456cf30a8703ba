import pytest

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: s.split()[0]):
        terminalreporter.write_line(line)


@pytest.fixture
def acceptance():
    """report(tag, ok, detail) records one pass/fail line for the summary; ok=None marks INFO."""

    def report(tag, ok, detail=""):
        status = "INFO" if ok is None else "PASS" if ok else "FAIL"
        line = f"{tag:<4} {status}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return report
