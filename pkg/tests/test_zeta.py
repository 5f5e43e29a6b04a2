from functools import lru_cache

import numpy as np
import pytest

from ctps import build_zeta, check_braiding_invariance, export_ctps, verify_ctps, verify_qsystem
from ctps.zeta import conjugate_symmetry_residual
from conftest import induction, model, qsys
from oracles import random_unitary

PHI = (1 + 5 ** 0.5) / 2


@lru_cache(maxsize=None)
def zeta(name, signs="+-"):
    return build_zeta(qsys(name), signs=signs, ind=induction(name))


@pytest.mark.parametrize("name", ["triv:ising", "triv:fib", "triv:semion", "triv:su2_4"])
def test_trivial_pair_entries(name):
    zs = zeta(name)
    d = zs.data.dims
    ring = zs.data.ring
    for i, (a, b, _) in enumerate(zs.summands):
        assert a == b
    for i, (l, _, _) in enumerate(zs.summands):
        for j, (m, _, _) in enumerate(zs.summands):
            for k, (n, _, _) in enumerate(zs.summands):
                v = zs.zeta.get((i, j, k), 0.0)
                if ring.admissible(l, m, n):
                    assert abs(v) == pytest.approx(np.sqrt(d[l] * d[m] / (zs.dtheta * d[n])), abs=1e-12)
                else:
                    assert v == 0


def test_fibonacci_dtheta():
    assert zeta("triv:fib").dtheta == pytest.approx(3.6180339887, abs=1e-9)


@pytest.mark.parametrize("name", ["triv:ising", "triv:fib", "d4", "su2_8_d"])
def test_unit_row(name):
    zs = zeta(name)
    K = len(zs.summands)
    for m in range(K):
        for n in range(K):
            v = np.sqrt(zs.dtheta) * zs.zeta.get((0, m, n), 0.0)
            assert abs(v) == pytest.approx(float(m == n), abs=1e-10)


def test_ising_trivial_residuals():
    rep = verify_ctps(zeta("triv:ising"))
    assert max(rep.residuals.values()) < 1e-10


def test_d4_ctps():
    zs = zeta("d4")
    rep = verify_ctps(zs)
    assert rep.passed and rep.dtheta == pytest.approx(12.0)
    assert check_braiding_invariance(zs) < 1e-8
    assert check_braiding_invariance(zeta("d4", "++")) > 1e-3


def test_su2_8_ctps():
    zs = zeta("su2_8_d")
    assert verify_ctps(zs).passed
    assert check_braiding_invariance(zs) < 1e-8


def test_perturbed_entry_breaks_isometry():
    zs = zeta("d4")
    z2 = dict(zs.zeta)
    key = sorted(z2)[len(z2) // 2]
    z2[key] = z2[key] + 0.05
    from ctps import ZetaSystem
    bad = ZetaSystem(zs.data, zs.Z, zs.signs, zs.summands, z2, zs.bases)
    assert verify_ctps(bad).residuals["isometry"] > 1e-3


@pytest.mark.parametrize("name", ["triv:fib", "d4", "su2_8_d"])
def test_conjugate_symmetry(name):
    assert conjugate_symmetry_residual(zeta(name), induction(name)) < 1e-9


def test_export_semion():
    Q, ZC = export_ctps(zeta("triv:semion"))
    assert ZC.tolist() == [[1, 0], [0, 1]]
    assert verify_qsystem(Q, tol=1e-8).passed


def test_export_z3_conjugation():
    Q, ZC = export_ctps(build_zeta(qsys("triv:z3"), ind=induction("triv:z3")))
    assert ZC.tolist() == [[1, 0, 0], [0, 0, 1], [0, 1, 0]]
    assert verify_qsystem(Q, tol=1e-8).passed


def test_export_d4():
    zs = zeta("d4")
    Q, ZC = export_ctps(zs)
    assert np.array_equal(ZC, zs.Z)
    assert verify_qsystem(Q, tol=1e-8).passed
    assert Q.summands.count(0) == 1


def test_export_fibonacci():
    Q, _ = export_ctps(zeta("triv:fib"))
    assert len(Q.summands) == 2 and verify_qsystem(Q, tol=1e-8).passed


def test_noncommutative_input_gives_diagonal_ctps():
    zs = zeta("fib_1t")
    assert np.array_equal(zs.Z, np.eye(2, dtype=int))
    assert verify_ctps(zs).passed and check_braiding_invariance(zs) < 1e-8


def test_transport_matches_direct_rebasing():
    rng = np.random.default_rng(4)
    U = random_unitary(2, rng)
    Q, ind = qsys("d4"), induction("d4")
    a = build_zeta(Q, rebase={(2, 2): U}, ind=ind)
    b = build_zeta(Q, rebase={(2, 2): U}, direct=True, ind=ind)
    assert max(abs(a.zeta[k] - b.zeta.get(k, 0)) for k in a.zeta) < 1e-12
    assert verify_ctps(b).passed
    assert max(abs(a.zeta[k] - zeta("d4").zeta[k]) for k in a.zeta) > 1e-3
