import contextlib
import time

import pytest

_RESULTS = []


@pytest.fixture
def criterion():
    """Record one acceptance criterion's outcome for the end-of-run report."""

    @contextlib.contextmanager
    def record(name):
        t0 = time.perf_counter()
        try:
            yield
        except BaseException as exc:
            _RESULTS.append((name, False, time.perf_counter() - t0, str(exc).splitlines()[0][:100] if str(exc) else type(exc).__name__))
            raise
        _RESULTS.append((name, True, time.perf_counter() - t0, ""))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, secs, why in _RESULTS:
        line = f"{'PASS' if ok else 'FAIL'}  {name}  ({secs:.1f}s)"
        if why:
            line += f"  {why}"
        terminalreporter.write_line(line)
