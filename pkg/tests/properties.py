"""Seeded property cases: each returns the worst deviation for one random instance."""
from functools import lru_cache

import numpy as np

from ctps import Induction, build_zeta, check_braiding_invariance, verify_ctps
from ctps.induction import induced_dimension
from ctps.morphism import identity, obj
from ctps.skeletal import left_inverse_word, scalar
from ctps.zeta import transport_zeta
from conftest import model, qsys
from helpers import composite_cup, composite_cupbar, random_morphism, random_pair_with_hom, random_word
from oracles import block_trace, gauge_qsystem, random_unitary

FUSION_MODELS = ("fib", "ising", "semion", "z3", "su2_3", "su2_4", "su2_5")
Q_NAMES = ("d4", "su2_8_d", "fib_1t", "su2_2_q", "triv:ising", "triv:su2_4")
PAIR_NAMES = ("d4", "su2_8_d")


def _qsys(name):
    if name == "su2_2_q":
        return _solved_su2_2()
    return qsys(name)


@lru_cache(maxsize=None)
def _solved_su2_2():
    from ctps import solve_qsystem
    return solve_qsystem(model("su2_2"), {0: 1, 2: 1})


def trace_case(seed: int) -> float:
    """d(rho) Phi_rho(S^* T) = d(tau) Phi_tau(T S^*), both equal to the categorical trace."""
    rng = np.random.default_rng(seed)
    data = model(FUSION_MODELS[rng.integers(len(FUSION_MODELS))])
    rho, tau = random_pair_with_hom(data, rng)
    X, Y = obj(*rho), obj(*tau)
    S, T = random_morphism(data, X, Y, rng), random_morphism(data, X, Y, rng)
    d = data.dims
    a = np.prod(d[list(rho)]) * scalar(left_inverse_word(data, S.H @ T))
    b = np.prod(d[list(tau)]) * scalar(left_inverse_word(data, T @ S.H))
    return float(max(abs(a - b), abs(a - block_trace(S.H @ T))))


def conjugate_case(seed: int) -> float:
    """(1 x R^*)(Rbar x 1) = (1 x Rbar^*)(R x 1)-type equations on a word give 1/d(rho)."""
    rng = np.random.default_rng(seed)
    data = model(FUSION_MODELS[rng.integers(len(FUSION_MODELS))])
    w = random_word(data, rng, 1, 3)
    wb = tuple(data.dual(a) for a in reversed(w))
    X, Xb = obj(*w), obj(*wb)
    d = float(np.prod(data.dims[list(w)]))
    R, Rb = composite_cup(data, w), composite_cupbar(data, w)
    one, oneb = identity(data, X), identity(data, Xb)
    e1 = one.tensor(R.H) @ Rb.tensor(one)
    e2 = oneb.tensor(Rb.H) @ R.tensor(oneb)
    # random endomorphism: the equations are natural in x
    x = random_morphism(data, X, X, rng)
    e3 = one.tensor(R.H) @ (x.tensor(oneb).tensor(one)) @ Rb.tensor(one)
    return float(max((e1 - one * (1 / d)).norm(), (e2 - oneb * (1 / d)).norm(),
                     abs(scalar(R.H @ R) - 1), abs(scalar(Rb.H @ Rb) - 1),
                     abs(e3.trace() - x.trace() / d)))


def dimension_case(seed: int) -> float:
    """d(alpha_lam) = d(lam) from the induced conjugate equations of a gauge-rotated Q-system."""
    rng = np.random.default_rng(seed)
    Q = gauge_qsystem(_qsys(Q_NAMES[rng.integers(len(Q_NAMES))]), rng)
    ind = Induction(Q)
    lam = int(rng.integers(Q.data.ring.rank))
    sign = "+-"[rng.integers(2)]
    dim, resid = induced_dimension(ind, lam, sign)
    return float(max(abs(dim - Q.data.dims[lam]), resid))


def gram_case(seed: int) -> float:
    """Orthonormality of phi-bases, stability under unitary rebasing, trace consistency."""
    rng = np.random.default_rng(seed)
    Q = gauge_qsystem(_qsys(Q_NAMES[rng.integers(len(Q_NAMES))]), rng)
    ind = Induction(Q)
    n = Q.data.ring.rank
    s1, s2 = "+-"[rng.integers(2)], "+-"[rng.integers(2)]
    lam, mu = int(rng.integers(n)), int(rng.integers(n))
    hb = ind.hom(((lam, s1),), ((mu, s2),))
    if not hb.dim:
        return 0.0
    d = Q.data.dims
    worst = hb.gram_residual()
    U = random_unitary(hb.dim, rng)
    new = []
    for j in range(hb.dim):
        acc = hb.maps[0] * U[0, j]
        for i in range(1, hb.dim):
            acc = acc + hb.maps[i] * U[i, j]
        new.append(acc)
    G = np.array([[ind.inner(a, b) for b in new] for a in new])
    worst = max(worst, float(np.abs(G - np.eye(hb.dim)).max()))
    for phi in new:
        a = d[lam] * ind.left_inverse(phi.adjoint() @ phi)
        b = d[mu] * ind.left_inverse(phi @ phi.adjoint())
        oracle = block_trace((phi.adjoint() @ phi).mor) / Q.dtheta
        worst = max(worst, abs(a - b), abs(a - oracle), ind.intertwining_residual(phi))
    return float(worst)


@lru_cache(maxsize=None)
def _base_zeta(name, signs):
    from conftest import induction
    return build_zeta(qsys(name), signs=signs, ind=induction(name))


def basis_case(seed: int, direct_every: int = 50) -> float:
    """CTPS residuals, d(theta) and locality are unchanged by random unitary phi-rebasing.

    The unit pair (0, 0) keeps its identity map: its phase is the pinned phase of w.
    """
    from ctps import ZetaSystem
    from conftest import induction
    rng = np.random.default_rng(seed)
    r = rng.random()
    name, signs = ("su2_8_d", "+-") if r < 0.1 else ("d4", "+-" if r < 0.55 else "-+")
    base = _base_zeta(name, signs)
    rebase = {(int(a), int(b)): random_unitary(int(base.Z[a, b]), rng)
              for a, b in zip(*np.nonzero(base.Z)) if (a, b) != (0, 0)}
    if seed % direct_every == 0:
        zs = build_zeta(qsys(name), signs=signs, rebase=rebase, direct=True, ind=induction(name))
    else:
        zs = ZetaSystem(base.data, base.Z, base.signs, base.summands,
                        transport_zeta(base.summands, base.zeta, rebase), base.bases)
    rep = verify_ctps(zs)
    return float(max(max(rep.residuals.values()), abs(zs.dtheta - base.dtheta),
                     check_braiding_invariance(zs)))
