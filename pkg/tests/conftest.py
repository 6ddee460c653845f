from __future__ import annotations

import random

import pytest


@pytest.fixture
def rng():
    return random.Random(20261015)


ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        status, text = ACCEPTANCE[k]
        terminalreporter.write_line(f"CRITERION {k:2d}: {status}  {text}")
