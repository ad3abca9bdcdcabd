import csv
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"

_CRITERIA: dict[int, tuple[str, bool, str]] = {}


def load_oracle():
    with open(DATA / "swkb_oracle.csv", newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    for row in rows:
        for key in ("omega", "ell", "hbar", "I", "deviation"):
            row[key] = float(row[key])
        row["n"] = int(row["n"])
    return rows


@pytest.fixture(scope="session")
def oracle_rows():
    return load_oracle()


@pytest.fixture
def criterion():
    """Record the verdict of one acceptance criterion for the terminal summary."""

    def record(number: int, title: str, passed: bool, detail: str):
        _CRITERIA[number] = (title, bool(passed), detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, passed, detail = _CRITERIA[number]
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{verdict}] criterion {number}: {title} -- {detail}")
