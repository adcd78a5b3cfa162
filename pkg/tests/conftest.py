import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

# (criterion, passed, detail) rows filled by test_acceptance.py
ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in sorted(ACCEPTANCE, key=lambda r: int(r[0][1:])):
        terminalreporter.write_line(f"{name} {'PASS' if passed else 'FAIL'}  {detail}")
