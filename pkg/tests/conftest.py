import pytest

_ACCEPTANCE_LINES: list[str] = []


class _Report:
    """Collects one status line per acceptance criterion."""

    def __call__(self, number: int, title: str, failures: list[str], detail: str = "") -> None:
        status = "PASS" if not failures else "FAIL"
        line = f"criterion {number} [{status}] {title}"
        if detail:
            line += f" -- {detail}"
        if failures:
            line += f" -- {len(failures)} failure(s), first: {failures[0]}"
        _ACCEPTANCE_LINES.append(line)
        print(line)


@pytest.fixture(scope="session")
def acceptance_report():
    return _Report()


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
