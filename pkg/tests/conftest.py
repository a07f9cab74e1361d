import random
import sys

import pytest

from cinfinity.algebra import Dgca
from cinfinity.fixtures import FM8_GROUPS, fm8, heisenberg
from cinfinity.hodge import hodge_from_inner_product, tensor_homotopy
from cinfinity.transfer import transfer


@pytest.fixture(scope="session")
def heis():
    return heisenberg()


@pytest.fixture(scope="session")
def heis_C(heis):
    return hodge_from_inner_product(heis)


@pytest.fixture(scope="session")
def heis_T(heis_C):
    return transfer(heis_C, 4)


@pytest.fixture(scope="session")
def heis_T5(heis_C):
    return transfer(heis_C, 5)


@pytest.fixture(scope="session")
def fm():
    return fm8()


@pytest.fixture(scope="session")
def fm_C(fm):
    return tensor_homotopy(fm, FM8_GROUPS)


@pytest.fixture(scope="session")
def fm_T(fm_C):
    return transfer(fm_C, 4)


@pytest.fixture(scope="session")
def fm_C_auto(fm):
    return hodge_from_inner_product(fm)


@pytest.fixture(scope="session")
def fm_T_auto(fm_C_auto):
    return transfer(fm_C_auto, 4)


@pytest.fixture(scope="session")
def three_gen():
    """Λ(x,y) ⊗ Q[z]/(z³) with |z| = 2, truncated above degree 4."""
    return Dgca([("x", 1), ("y", 1), ("z", 2)], top_degree=4, name="G3")


@pytest.fixture(scope="session")
def zero_product():
    """a, b in degree 1 and y in degree 2, every positive product zero."""
    return Dgca([("a", 1), ("b", 1), ("y", 2)], table={}, top_degree=2, name="W")


@pytest.fixture
def rng():
    return random.Random(20241016)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
