"""Collects one pass/fail line per acceptance criterion for the terminal summary."""

import contextlib
import time

RESULTS: dict[int, str] = {}


@contextlib.contextmanager
def criterion(number: int, title: str):
    info: dict = {}
    start = time.perf_counter()
    try:
        yield info
    except BaseException as exc:
        RESULTS[number] = f"FAIL criterion {number}: {title} ({time.perf_counter() - start:.2f}s) {type(exc).__name__}: {exc}"
        print(RESULTS[number])
        raise
    detail = " ".join(f"{k}={v}" for k, v in info.items())
    RESULTS[number] = f"PASS criterion {number}: {title} ({time.perf_counter() - start:.2f}s) {detail}".rstrip()
    print(RESULTS[number])
