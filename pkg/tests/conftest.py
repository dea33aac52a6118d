from fractions import Fraction

import pytest
from hypothesis import settings

from hypergpf.algebraic import x_of_s
from hypergpf.data import HyperData

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

F = Fraction


@pytest.fixture(scope="session")
def x2():
    return x_of_s(2)


@pytest.fixture(scope="session")
def x3():
    return x_of_s(3)


@pytest.fixture(scope="session")
def lam_r1(x3):
    """(1,0,3; 0, 1/2; 3/4)"""
    return HyperData.south(1, 3, 0, x3)


@pytest.fixture(scope="session")
def lam_r2(x3):
    """(1,0,3; 1/3, 1/2; 3/4)"""
    return HyperData.south(1, 3, F(1, 3), x3)


@pytest.fixture(scope="session")
def lam_ir(x2):
    """(2,0,4; 0, 1/2; 2*sqrt(2) - 2)"""
    return HyperData.south(2, 4, 0, x2)
