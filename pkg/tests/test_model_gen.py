import numpy as np
import pytest

from ctps import builtin, gen_pointed, gen_su2k, validate_skeletal, validate_ring, verlinde_fusion
from ctps.skeletal import twists
from oracles import fib_F, su2k_cg_fusion, su2k_dims

PHI = (1 + 5 ** 0.5) / 2


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
def test_su2k_dims_and_fusion(k):
    data = gen_su2k(k)
    assert np.allclose(data.dims, su2k_dims(k), atol=1e-12)
    assert np.array_equal(data.ring.N, su2k_cg_fusion(k))
    assert np.array_equal(verlinde_fusion(data.ring.S)[0], su2k_cg_fusion(k))
    assert all(r.passed for r in validate_skeletal(data))


def test_su2k_level_one_and_four():
    assert np.allclose(gen_su2k(1).dims, [1, 1])
    assert np.allclose(gen_su2k(4).dims, [1, 1.7320508076, 2, 1.7320508076, 1], atol=1e-9)


def test_su2k_level_cap():
    with pytest.raises(ValueError):
        gen_su2k(13)


def test_pointed():
    assert gen_pointed(1, 0).ring.rank == 1
    sem = gen_pointed(2, 1)
    assert all(r.passed for r in validate_skeletal(sem, tol=1e-12))
    assert np.isclose(twists(sem)[1], 1j)
    z3 = gen_pointed(3, 2)
    assert all(r.passed for r in validate_skeletal(z3))
    assert np.isclose(twists(z3)[1], np.exp(2j * np.pi / 3))
    assert validate_ring(z3.ring).passed


def test_pointed_rejects_odd_form():
    with pytest.raises(ValueError):
        gen_pointed(3, 1)


def test_fibonacci_F_entries():
    fib = builtin("fibonacci")
    t = 1
    block = np.array([[fib.fsym(t, t, t, t, e, f) for f in (0, 1)] for e in (0, 1)])
    # gauge independent content: |entries| and the spectrum of the symmetric block
    assert np.allclose(np.abs(block), np.abs(fib_F()), atol=1e-12)
    assert sorted(np.round(np.real(np.linalg.eigvals(block)), 12)) == [-1.0, 1.0]
    assert {round(abs(x), 10) for x in block.ravel()} == {round(1 / PHI, 10), round(PHI ** -0.5, 10)}


def test_ising_builtin():
    ising = builtin("ising")
    assert ising.dims[1] == pytest.approx(2 ** 0.5)
    assert abs(ising.rsym(1, 1, 0) * np.conj(ising.rsym(1, 1, 2))) == pytest.approx(1.0)
    assert validate_ring(ising.ring).passed


@pytest.mark.parametrize("name", ["ising", "fib", "semion"])
def test_builtins_validate(name):
    assert all(r.passed for r in validate_skeletal(builtin(name)))
