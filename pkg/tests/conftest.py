import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# (number, title, passed, detail) filled in by test_acceptance
ACCEPTANCE = []


@pytest.fixture
def criterion():
    def record(number, title, passed, detail=""):
        line = (number, title, bool(passed), detail)
        ACCEPTANCE.append(line)
        print(f"criterion {number:>2} {'PASS' if passed else 'FAIL'}  {title}  {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE, key=lambda r: r[0]):
        tr.write_line(f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {title}  {detail}")
