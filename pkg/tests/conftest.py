import random

import pytest

from helpers import ACCEPTANCE, toy_machine


@pytest.fixture
def toy():
    return toy_machine()


@pytest.fixture
def rng():
    return random.Random(20240601)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[n]
        ok = all(passed for passed, _ in parts.values())
        notes = "; ".join(f"{name}: {'ok' if passed else 'FAILED'} ({detail})" for name, (passed, detail) in parts.items())
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {notes}")
