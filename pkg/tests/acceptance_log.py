"""Collects one summary line per acceptance criterion for the pytest report."""

LINES: list[str] = []


def record(number: int, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    LINES.append(line)
    print(line)
