import pytest

VERDICTS_KEY = pytest.StashKey[list]()


@pytest.fixture
def verdicts(request):
    return request.config.stash.setdefault(VERDICTS_KEY, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(VERDICTS_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
