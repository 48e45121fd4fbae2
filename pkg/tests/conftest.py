import pytest

_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line per criterion; printed in the terminal summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def record(number, title, checks):
        ok = all(passed for _, passed, _ in checks)
        detail = "; ".join(f"{label}={value}" for label, _, value in checks)
        failed = [label for label, passed, _ in checks if not passed]
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} | {detail}"
        lines.append(line)
        print(line)
        assert ok, f"criterion {number} failed checks: {failed}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
