from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from fracsobolev.grid import GridSpec

ORACLE_PATH = Path(__file__).parent / "oracles" / "values.json"


@pytest.fixture(scope="session")
def grid() -> GridSpec:
    return GridSpec()


@pytest.fixture(scope="session")
def oracle() -> dict:
    """Values frozen by ``tests/oracles/generate.py`` (mpmath)."""
    return json.loads(ORACLE_PATH.read_text())


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(42)


def rel_l2(a, b) -> float:
    a = getattr(a, "values", a)
    b = getattr(b, "values", b)
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


#: One line per acceptance criterion, printed in the terminal summary.
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
