"""Collected one-line verdicts for the acceptance criteria."""

LINES = []


def report(number: int, passed: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
    LINES.append(line)
    print(line)
