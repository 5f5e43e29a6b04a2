import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ctps import Induction, builtin, gen_pointed, gen_su2k, solve_qsystem, trivial_qsystem


@lru_cache(maxsize=None)
def model(name: str):
    if name.startswith("su2_"):
        return gen_su2k(int(name[4:]))
    if name == "z3":
        return gen_pointed(3, 2)
    return builtin(name)


@lru_cache(maxsize=None)
def qsys(name: str):
    """Named Q-systems used across the suite."""
    if name == "d4":
        return solve_qsystem(model("su2_4"), {0: 1, 4: 1})
    if name == "su2_8_d":
        return solve_qsystem(model("su2_8"), {0: 1, 8: 1})
    if name == "fib_1t":
        return solve_qsystem(model("fib"), {0: 1, 1: 1})
    if name.startswith("triv:"):
        return trivial_qsystem(model(name[5:]))
    raise KeyError(name)


@lru_cache(maxsize=None)
def induction(name: str):
    return Induction(qsys(name))


@pytest.fixture(scope="session")
def su2_4():
    return model("su2_4")


@pytest.fixture(scope="session")
def fib():
    return model("fib")


@pytest.fixture(scope="session")
def ising():
    return model("ising")


@pytest.fixture(scope="session")
def d4():
    return qsys("d4")


@pytest.fixture(scope="session")
def d4_ind():
    return induction("d4")
