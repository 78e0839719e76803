"""One result line per acceptance criterion, collected across the run."""

from __future__ import annotations

import time
from contextlib import contextmanager

import pytest

LINES: dict = {}


def _record(num: int, status: str, title: str, detail: str) -> None:
    line = f"criterion {num} {status}: {title}" + (f" ({detail})" if detail else "")
    LINES[num] = line
    print(line, flush=True)


@contextmanager
def criterion(num: int, title: str, budget: float = None):
    """Time the body, fail it past ``budget`` seconds, and log the outcome.

    The body may set ``info["detail"]`` for the log line.
    """
    info = {"detail": ""}
    start = time.perf_counter()
    try:
        yield info
    except pytest.skip.Exception as exc:
        _record(num, "SKIP", title, str(exc.msg if hasattr(exc, "msg") else exc))
        raise
    except BaseException as exc:
        _record(num, "FAIL", title, f"{type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}")
        raise
    elapsed = time.perf_counter() - start
    detail = ", ".join(filter(None, [info["detail"], f"{elapsed:.2f}s"]))
    if budget is not None and elapsed >= budget:
        _record(num, "FAIL", title, f"{detail} over the {budget:g}s budget")
        raise AssertionError(f"criterion {num} took {elapsed:.2f}s, budget {budget:g}s")
    _record(num, "PASS", title, detail)
