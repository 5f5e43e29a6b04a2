"""Reference computations written independently of the library code paths."""
import itertools

import numpy as np


def su2k_dims(k):
    return np.array([np.sin((j + 1) * np.pi / (k + 2)) / np.sin(np.pi / (k + 2)) for j in range(k + 1)])


def su2k_cg_fusion(k):
    """Truncated Clebsch-Gordan rule on doubled spins."""
    n = k + 1
    N = np.zeros((n, n, n), dtype=np.int64)
    for a, b, c in itertools.product(range(n), repeat=3):
        if (a + b + c) % 2 == 0 and abs(a - b) <= c <= min(a + b, 2 * k - a - b):
            N[a, b, c] = 1
    return N


def block_trace(m):
    """Categorical trace straight from the charge blocks."""
    d = m.cat.ring.dims
    return sum(d[c] * np.trace(b) for c, b in m.blocks.items())


def fib_F():
    phi = (1 + 5 ** 0.5) / 2
    return np.array([[1 / phi, phi ** -0.5], [phi ** -0.5, -1 / phi]])


def commutant_integer_points(S, T, bound=3):
    """Nonnegative integer Z (Z00 = 1, entries <= bound) with ZS = SZ and ZT = TZ.

    Solves the linear commutant via the Kronecker vec formulation, then
    enumerates integer values on a set of pivot entries and reconstructs the rest.
    """
    S = np.asarray(S, dtype=complex)
    Tm = np.diag(np.asarray(T, dtype=complex))
    n = S.shape[0]
    I = np.eye(n)
    # vec(ZX - XZ) = (X^T (x) I - I (x) X) vec(Z), column-major vec
    rows = [np.kron(X.T, I) - np.kron(I, X) for X in (S, Tm)]
    Mc = np.vstack(rows)
    M = np.vstack([Mc.real, Mc.imag])
    _, sv, Vh = np.linalg.svd(M)
    rank = int((sv > 1e-9 * sv[0]).sum())
    B = Vh[rank:].T  # columns span the real commutant (vec form)
    m = B.shape[1]
    # greedy pivot entries making B[piv] invertible
    piv = []
    for i in range(n * n):
        trial = piv + [i]
        if np.linalg.matrix_rank(B[trial], tol=1e-9) == len(trial):
            piv = trial
        if len(piv) == m:
            break
    P = B[piv]
    unit = 0  # vec index of Z[0,0] (column-major)
    found = []
    for vals in itertools.product(range(bound + 1), repeat=m):
        v = np.array(vals, dtype=float)
        if unit in piv and v[piv.index(unit)] != 1:
            continue
        z = B @ np.linalg.solve(P, v)
        Zi = np.rint(z)
        if np.abs(z - Zi).max() > 1e-8 or Zi.min() < 0 or Zi.max() > bound or Zi[unit] != 1:
            continue
        found.append(Zi.reshape(n, n, order="F").astype(np.int64))
    uniq = {Z.tobytes(): Z for Z in found}
    return list(uniq.values())


def random_unitary(n, rng):
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Qm, R = np.linalg.qr(A)
    return Qm * (np.diag(R) / np.abs(np.diag(R)))


def gauge_qsystem(Q, rng):
    """Phase gauge transform u_l u_m conj(u_n) on mult, unit summand fixed."""
    from ctps import QSystem

    u = np.exp(2j * np.pi * rng.random(len(Q.summands)))
    u[Q.summands.index(0)] = 1
    mult = {(l, m, n): u[l] * u[m] * np.conj(u[n]) * v for (l, m, n), v in Q.mult.items()}
    return QSystem(Q.data, Q.summands, mult)
