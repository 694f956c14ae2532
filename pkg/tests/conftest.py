import json
from pathlib import Path

import pytest
from hypothesis import settings

settings.register_profile("pglab", deadline=None, max_examples=40)
settings.load_profile("pglab")

FIXTURES = Path(__file__).parent / "fixtures" / "derived.json"


@pytest.fixture(scope="session")
def derived():
    return json.loads(FIXTURES.read_text())


def fractions_of(mapping):
    """{"e": "a/b"} -> {e: Fraction}"""
    from fractions import Fraction
    return {int(e): Fraction(c) for e, c in mapping.items()}


# one line per acceptance criterion, printed after the run
CRITERIA = {}


def record(number, passed, detail):
    CRITERIA[number] = (passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        passed, detail = CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")


def amend(number, text):
    passed, detail = CRITERIA.get(number, (False, ""))
    CRITERIA[number] = (passed, f"{detail}; {text}" if detail else text)
