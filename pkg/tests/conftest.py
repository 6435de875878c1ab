import pytest

_VERDICTS: dict = {}


@pytest.fixture
def verdict():
    """Record one acceptance criterion's outcome, then assert it.

    The summary lines are printed at the end of the session whether the
    criterion passed or not.
    """
    def record(number: int, title: str, passed: bool, detail: str) -> None:
        _VERDICTS[number] = (title, bool(passed), detail)
        assert passed, f"criterion {number} ({title}): {detail}"
    return record


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_VERDICTS):
        title, passed, detail = _VERDICTS[number]
        terminalreporter.write_line(
            f"criterion {number:>2} {'PASS' if passed else 'FAIL'}  {title}: {detail}")
