import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record a criterion's checks, print one line, then assert them all."""
    def report(number: int, title: str, checks: list[tuple[str, bool]]):
        failed = [label for label, ok in checks if not ok]
        status = "PASS" if not failed else "FAIL"
        line = f"{status} criterion {number:2d}: {title}"
        if failed:
            line += " [failed: " + "; ".join(failed) + "]"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert not failed, line
    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
