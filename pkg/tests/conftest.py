"""Shared test hooks: echo acceptance-criterion results in the summary."""

_acceptance_lines: list[str] = []


def record_pass(name: str, detail: str) -> None:
    """Register a criterion result for the end-of-run summary."""
    _acceptance_lines.append(f"PASS {name}: {detail}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
