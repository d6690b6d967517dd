import pytest

_VERDICTS: dict[int, tuple[str, str]] = {}


@pytest.fixture(scope="session")
def verdicts():
    return _VERDICTS


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_VERDICTS):
        status, detail = _VERDICTS[k]
        terminalreporter.write_line(f"criterion {k}: {status}  {detail}")
