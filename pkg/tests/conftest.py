import random
from fractions import Fraction

import pytest

from kamrfp.instances import parallel_example
from kamrfp.network import Network

ACCEPTANCE: list[tuple[str, bool, str]] = []


def record(criterion: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE.append((criterion, ok, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {criterion}  {detail}")


@pytest.fixture
def b4():
    return parallel_example(4)


@pytest.fixture
def single_arc():
    return Network(2, ((1, 2, Fraction(5)),), 1, 2)


@pytest.fixture
def parallel_12():
    return Network(2, ((1, 2, Fraction(1)), (1, 2, Fraction(2))), 1, 2)


@pytest.fixture
def rng():
    return random.Random(20261019)
