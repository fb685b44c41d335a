"""Collects one status per acceptance criterion for the terminal summary."""

from __future__ import annotations

from contextlib import contextmanager

RESULTS: dict[int, list[tuple[bool, str]]] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    RESULTS.setdefault(criterion, []).append((ok, detail))


@contextmanager
def criterion(n: int, detail: str):
    try:
        yield
    except BaseException as exc:
        record(n, False, f"{detail}: {type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}")
        raise
    record(n, True, detail)


def summary_lines() -> list[str]:
    out = []
    for n in sorted(RESULTS):
        parts = RESULTS[n]
        ok = all(p[0] for p in parts)
        detail = "; ".join(d if good else f"FAILED {d}" for good, d in parts)
        out.append(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    return out
