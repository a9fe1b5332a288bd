import pytest

_KEY = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_KEY] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(n, ok, detail)``."""
    board = request.config.stash[_KEY]

    def record(n: int, ok: bool, detail: str) -> bool:
        board[n] = (ok, detail)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    board = config.stash.get(_KEY, {})
    if not board:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(board):
        ok, detail = board[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}")
