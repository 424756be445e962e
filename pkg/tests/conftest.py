import time

import pytest

# criterion number -> (title, passed, detail, seconds)
ACCEPTANCE: dict[int, tuple[str, bool, str, float]] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion's verdict for the terminal summary.

    Usage: ``check = criterion(3, "title")`` then ``check(ok, detail)``;
    the helper asserts ``ok`` so the pytest result matches the summary line.
    """
    start = time.perf_counter()

    def make(number: int, title: str):
        def check(ok: bool, detail: str):
            ACCEPTANCE[number] = (title, bool(ok), detail, time.perf_counter() - start)
            assert ok, f"criterion {number} ({title}): {detail}"
        return check

    return make


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok, detail, seconds = ACCEPTANCE[number]
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{verdict}] {number:2d}. {title}: {detail} ({seconds:.1f}s)")
