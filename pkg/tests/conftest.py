import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from nurse_eda.instance import Instance, NurseSpec, ShiftPattern

settings.register_profile("fast", max_examples=20, deadline=None)
settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

GOLDEN_DIR = Path(__file__).parent / "golden"

ACCEPTANCE_LINES: list[str] = []


def golden(name: str) -> dict:
    return json.loads((GOLDEN_DIR / f"{name}.json").read_text())


def pat(text: str) -> ShiftPattern:
    return ShiftPattern.from_string(text.replace(" ", ""))


def make_instance(nurses, demand, num_grades=1) -> Instance:
    """nurses: list of (grade, [(cover_string, cost), ...])."""
    specs = []
    for i, (grade, pats) in enumerate(nurses):
        specs.append(NurseSpec(i + 1, grade, tuple(pat(c) for c, _ in pats), tuple(p for _, p in pats)))
    return Instance(tuple(specs), num_grades, demand)


def zero_demand(g=1):
    return [[0] * g for _ in range(14)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
