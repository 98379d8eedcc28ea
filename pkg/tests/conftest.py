import pytest

from mixedgraded import mutations

ACCEPTANCE_LINES = []


@pytest.fixture(autouse=True)
def _no_mutation(monkeypatch):
    monkeypatch.delenv("MIXEDGRADED_MUTATION", raising=False)
    yield
    assert not any(mutations.active(n) for n in mutations.KNOWN)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
