import numpy as np
import pytest

from ctps import FusionRing, ModularDataError, StructuralError, conjugation_matrix, pf_dimensions, validate_ring, verlinde_fusion
from conftest import model
from oracles import su2k_cg_fusion

PHI = (1 + 5 ** 0.5) / 2


def fib_ring(ntt=1):
    N = np.zeros((2, 2, 2), dtype=int)
    N[0, 0, 0] = N[0, 1, 1] = N[1, 0, 1] = N[1, 1, 0] = 1
    N[1, 1, 1] = ntt
    return FusionRing.from_rules(("1", "tau"), N, (0, 1))


def test_trivial_ring():
    r = FusionRing.from_rules(("1",), np.ones((1, 1, 1), dtype=int), (0,))
    assert validate_ring(r).passed
    assert np.allclose(pf_dimensions(r.N), [1.0])
    assert conjugation_matrix(r).tolist() == [[1]]
    N, res = verlinde_fusion(np.array([[1.0]]))
    assert N.tolist() == [[[1]]] and res < 1e-12


def test_fibonacci_ring():
    rep = validate_ring(fib_ring())
    assert rep.passed
    assert pf_dimensions(fib_ring().N)[1] == pytest.approx(1.6180339887, abs=1e-9)


def test_fibonacci_double_multiplicity_passes_ring_axioms():
    r = fib_ring(2)
    rep = validate_ring(r)
    assert rep.passed
    assert rep["verlinde"].skipped and rep["modular"].skipped
    assert r.dims[1] == pytest.approx(1 + 2 ** 0.5)


def test_ising_dims():
    assert model("ising").ring.dims[1] == pytest.approx(1.4142135624, abs=1e-9)


def test_broken_ring_shape():
    with pytest.raises(StructuralError):
        FusionRing.from_rules(("1", "x"), np.ones((2, 2), dtype=int), (0, 1))


def test_nonassociative_ring_fails():
    N = np.zeros((3, 3, 3), dtype=int)
    for a in range(3):
        N[0, a, a] = N[a, 0, a] = 1
    N[1, 1, 0] = N[2, 2, 0] = 1
    N[1, 2, 1] = N[2, 1, 1] = 1  # breaks associativity and reciprocity
    r = FusionRing(("1", "a", "b"), N, (0, 1, 2), np.ones(3))
    rep = validate_ring(r)
    assert not rep.passed


def test_verlinde_su2k4_matches_cg_rule():
    S = model("su2_4").ring.S
    N, res = verlinde_fusion(S)
    assert res < 1e-9
    assert np.array_equal(N, su2k_cg_fusion(4))


def test_verlinde_rejects_random_unitary():
    rng = np.random.default_rng(3)
    A = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    U, _ = np.linalg.qr(A)
    with pytest.raises(ModularDataError):
        verlinde_fusion(U)


@pytest.mark.parametrize("name", ["ising", "fib", "semion", "z3", "su2_1", "su2_2", "su2_4", "su2_8"])
def test_ring_invariants(name):
    ring = model(name).ring
    rep = validate_ring(ring)
    assert rep.passed
    d = ring.dims
    assert np.abs(ring.N @ d - np.outer(d, d)).max() < 1e-9
    C = conjugation_matrix(ring)
    assert np.array_equal(C @ C, np.eye(ring.rank, dtype=int))
    if ring.S is not None:
        N, _ = verlinde_fusion(ring.S)
        assert np.array_equal(N, ring.N)


def test_conjugation_matrices():
    assert np.array_equal(conjugation_matrix(model("ising").ring), np.eye(3, dtype=int))
    assert conjugation_matrix(model("z3").ring).tolist() == [[1, 0, 0], [0, 0, 1], [0, 1, 0]]
