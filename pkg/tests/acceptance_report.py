"""Timing and PASS/FAIL bookkeeping for the acceptance suite."""

import time
from contextlib import contextmanager

LINES: list[str] = []


@contextmanager
def criterion(number: int, title: str, limit: float):
    """Run the body, then require it to have finished within ``limit`` seconds."""
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        _report(number, title, False, elapsed, limit, f"{type(exc).__name__}: {exc}")
        raise
    elapsed = time.perf_counter() - start
    ok = elapsed < limit
    _report(number, title, ok, elapsed, limit, "" if ok else "over time limit")
    assert ok, f"criterion {number} took {elapsed:.3f}s, limit {limit}s"


def _report(number, title, ok, elapsed, limit, note):
    status = "PASS" if ok else "FAIL"
    line = f"criterion {number:>2} {status} {elapsed:7.3f}s (limit {limit:g}s) {title}"
    if note:
        line += f" [{note.splitlines()[0][:120]}]"
    LINES.append(line)
    print(line)
