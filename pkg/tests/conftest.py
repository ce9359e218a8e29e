import pytest

_acceptance_key = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one acceptance line; ``criterion(n, ok, detail)``."""
    lines = request.config.stash.setdefault(_acceptance_key, [])

    def record(n, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_acceptance_key, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
