from pathlib import Path

import pytest
from hypothesis import settings

from pacone.deformation import build_system, solve_deformation
from pacone.presentation import load_fixture, load_input

# exact arithmetic is slow per example; keep the suite fast and reproducible
settings.register_profile("pacone", max_examples=25, deadline=None, derandomize=True)
settings.load_profile("pacone")

DATA = Path(__file__).parent / "data"
SYNTHETIC = ["torus1", "torus2", "torus_two_fixed", "torus_two_swapped"]

# acceptance lines collected by tests/test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


@pytest.fixture(scope="session")
def inp():
    return load_fixture("genus2")


@pytest.fixture(scope="session")
def K(inp):
    return inp.field


@pytest.fixture(scope="session")
def r(K):
    return K.sqrt


@pytest.fixture(scope="session")
def system(inp):
    return build_system(inp)


@pytest.fixture(scope="session")
def symbolic(inp, system):
    return solve_deformation(inp, system=system)


@pytest.fixture(scope="session")
def pinned(inp, system, r):
    # the unique free values compatible with every relator
    return solve_deformation(inp, free_y={1: 0, 2: -2 * r}, system=system)


def synthetic(name):
    return load_input(DATA / f"{name}.json")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
