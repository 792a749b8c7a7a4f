import pytest

from artifact.klrw_core import QuiverConfig

_ACCEPTANCE: dict[int, bool] = {}


@pytest.fixture
def cfg4():
    return QuiverConfig(4)


@pytest.fixture
def criterion():
    """Record the outcome of an acceptance criterion and print its status line."""

    def record(k: int, ok: bool) -> bool:
        _ACCEPTANCE[k] = ok
        print(f"criterion {k}: {'PASS' if ok else 'FAIL'}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"criterion {k}: {'PASS' if _ACCEPTANCE[k] else 'FAIL'}")
