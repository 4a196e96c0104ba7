import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

_CRITERIA: dict = {}


@pytest.fixture
def record_criterion():
    """Record one criterion outcome; the summary is printed at the end of the run."""

    def record(number: int, name: str, ok: bool, detail: str = "", seconds: float | None = None):
        prev = _CRITERIA.get(number)
        if prev is not None:
            ok = ok and prev[1]
            detail = "; ".join(x for x in (prev[2], detail) if x)
            seconds = (prev[3] or 0) + (seconds or 0)
        _CRITERIA[number] = (name, ok, detail, seconds)
        print(_format(number, _CRITERIA[number]))

    return record


def _format(number, entry):
    name, ok, detail, seconds = entry
    t = f" [{seconds:.1f}s]" if seconds is not None else ""
    tail = f" -- {detail}" if detail else ""
    return f"criterion {number} ({name}): {'PASS' if ok else 'FAIL'}{t}{tail}"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        terminalreporter.write_line(_format(number, _CRITERIA[number]))
