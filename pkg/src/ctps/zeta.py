"""Coefficients of the canonical tensor product Q-system built from an extension pair.

The summands of theta are triples ``(lam1, lam2, l)`` with ``l < Z[lam1, lam2]``,
sorted; ``(0, 0, 0)`` comes first.  Label pairs live in the product category
``C x Cbar`` whose second factor carries conjugated F and R data.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fusion_ring import StructuralError, conjugation_matrix
from .induction import Induction, coupling_matrix, parse_signs
from .morphism import vertex
from .qsystem import QSystem, coefficient_residuals
from .skeletal import DERIVED_TOL, ProductData, SkeletalData

END_TO_END_TOL = 1e-8


@dataclass
class ZetaSystem:
    data: SkeletalData
    Z: np.ndarray
    signs: tuple[str, str]
    summands: list[tuple[int, int, int]]
    zeta: dict
    bases: dict = field(repr=False, default_factory=dict)

    @property
    def dtheta(self) -> float:
        d = self.data.dims
        return float(np.einsum("a,ab,b->", d, self.Z, d))

    def pair_labels(self) -> list[int]:
        n = self.data.ring.rank
        return [a * n + b for a, b, _ in self.summands]


@dataclass
class CTPSReport:
    residuals: dict[str, float]
    threshold: float
    dtheta: float

    @property
    def passed(self) -> bool:
        return all(v < self.threshold for v in self.residuals.values())

    def to_dict(self) -> dict:
        return {"passed": self.passed, "threshold": self.threshold, "dtheta": self.dtheta,
                "residuals": {k: self.residuals[k] for k in sorted(self.residuals)}}


def _summands(Z) -> list[tuple[int, int, int]]:
    n1, n2 = Z.shape
    return [(a, b, l) for a in range(n1) for b in range(n2) for l in range(int(Z[a, b]))]


def _rebased_maps(hb, U):
    if U is None:
        return list(hb.maps)
    out = []
    for j in range(hb.dim):
        acc = hb.maps[0] * U[0, j]
        for i in range(1, hb.dim):
            acc = acc + hb.maps[i] * U[i, j]
        out.append(acc)
    return out


def build_zeta(Q: QSystem, signs=("+", "-"), rebase: dict | None = None, direct: bool = False,
               ind: Induction | None = None) -> ZetaSystem:
    """zeta^n_{lm} = sqrt(d(lam2)d(mu2)/(d(theta)d(nu2))) Phi[iota(T1^*)(phi_l^* x phi_m^*)iota(T2)phi_n].

    ``rebase`` maps ``(lam1, lam2)`` to a unitary U, replacing ``phi_j`` by
    ``sum_i U[i, j] phi_i``.  The default computes zeta once and transports it
    multilinearly; ``direct=True`` recomputes every entry from rebased maps.
    """
    ind = ind or Induction(Q)
    s1, s2 = parse_signs(signs)
    rep = coupling_matrix(Q, signs=(s1, s2), ind=ind)
    Z = rep.Z
    data = ind.data
    ring = data.ring
    d = data.dims
    summ = _summands(Z)
    dt = float(np.einsum("a,ab,b->", d, Z, d))
    rebase = rebase or {}

    def maps_for(a, b):
        hb = rep.bases[(a, b)]
        return _rebased_maps(hb, rebase.get((a, b)) if direct else None)

    phis = {}
    for (a, b, l) in summ:
        phis[(a, b, l)] = maps_for(a, b)[l]
    prod_cache: dict = {}
    zeta = {}
    K = len(summ)
    for i in range(K):
        l1, l2, _ = summ[i]
        for j in range(K):
            m1, m2, _ = summ[j]
            for k in range(K):
                n1, n2, _ = summ[k]
                if not (ring.admissible(l1, m1, n1) and ring.admissible(l2, m2, n2)):
                    continue
                if (i, j) not in prod_cache:
                    prod_cache[(i, j)] = ind.relative_product(phis[summ[i]].adjoint(), phis[summ[j]].adjoint())
                T1 = ind.iota(vertex(data, l1, m1, n1), ((n1, s1),), ((l1, s1), (m1, s1)))
                T2 = ind.iota(vertex(data, l2, m2, n2), ((n2, s2),), ((l2, s2), (m2, s2)))
                X = T1.adjoint() @ prod_cache[(i, j)] @ T2 @ phis[summ[k]]
                zeta[(i, j, k)] = np.sqrt(d[l2] * d[m2] / (dt * d[n2])) * ind.left_inverse(X)
    if rebase and not direct:
        zeta = transport_zeta(summ, zeta, rebase)
    return ZetaSystem(data, Z, (s1, s2), summ, zeta, rep.bases)


def transport_zeta(summands, zeta: dict, rebase: dict) -> dict:
    """zeta under ``phi_j -> sum_i U[i, j] phi_i``: conj-linear in l, m and linear in n."""
    pos = {s: i for i, s in enumerate(summands)}

    def coef(idx):
        a, b, l = summands[idx]
        U = rebase.get((a, b))
        if U is None:
            return [(idx, 1.0)]
        return [(pos[(a, b, r)], U[r, l]) for r in range(U.shape[0])]

    out = {}
    for (i, j, k) in zeta:
        acc = 0.0
        for (x, u) in coef(i):
            for (y, v) in coef(j):
                for (z, w) in coef(k):
                    acc += np.conj(u) * np.conj(v) * w * zeta.get((x, y, z), 0.0)
        out[(i, j, k)] = acc
    return out


def product_category(data: SkeletalData) -> ProductData:
    memo = data._cache.setdefault("product_self", {})
    if "p" not in memo:
        memo["p"] = ProductData(data, data, conjugate=True)
    return memo["p"]


def verify_ctps(zs: ZetaSystem, tol: float = END_TO_END_TOL) -> CTPSReport:
    """Coefficient-form Q1, Q2, Q3, isometry and the dimension identity."""
    P = product_category(zs.data)
    labels = zs.pair_labels()
    res = coefficient_residuals(labels, zs.zeta, P.dims, P.fsym, P.ring.admissible)
    d = zs.data.dims
    res["dimension_identity"] = abs(float(np.einsum("a,ab,b->", d, zs.Z, d)) / zs.dtheta - 1.0)
    return CTPSReport(res, tol, zs.dtheta)


def check_braiding_invariance(zs: ZetaSystem) -> float:
    """max |zeta^n_{ml} - R1 conj(R2) zeta^n_{lm}|: invariance under eps(theta, theta)."""
    if not zs.data.braided:
        raise StructuralError("no braiding data (R-symbols) present")
    P = product_category(zs.data)
    labels = zs.pair_labels()
    worst = 0.0
    for (l, m, n), v in zs.zeta.items():
        swapped = zs.zeta.get((m, l, n), 0.0)
        worst = max(worst, abs(swapped - P.rsym(labels[l], labels[m], labels[n]) * v))
    return float(worst)


def export_ctps(zs: ZetaSystem) -> tuple[QSystem, np.ndarray]:
    """The CTPS as a QSystem over the product category, and the matrix ZC."""
    P = product_category(zs.data)
    Q = QSystem(P, tuple(zs.pair_labels()), {k: v for k, v in zs.zeta.items() if v != 0})
    C = conjugation_matrix(zs.data.ring)
    return Q, (zs.Z @ C).astype(np.int64)


def conjugate_symmetry_residual(zs: ZetaSystem, ind: Induction) -> float:
    """Recompute conj(zeta) from the side-swapped formula with psi_l ~ phi_l^*.

    ``psi_l`` is ``phi_l^*`` normalized in the scalar product of the second side,
    so that conj(zeta^n_{lm}) = sqrt(d(lam1)d(mu1)/(d(theta)d(nu1))) Phi2[iota(T2^*)(psi_l^* x psi_m^*)iota(T1)psi_n].
    """
    data = zs.data
    d = data.dims
    s1, s2 = zs.signs
    dt = zs.dtheta
    psis = {}
    for (a, b, l) in zs.summands:
        phi = zs.bases[(a, b)].maps[l]
        adj = phi.adjoint()
        psis[(a, b, l)] = adj * (1 / np.sqrt(ind.inner(adj, adj).real))
    worst = 0.0
    summ = zs.summands
    for (i, j, k), v in zs.zeta.items():
        (l1, l2, _), (m1, m2, _), (n1, n2, _) = summ[i], summ[j], summ[k]
        T1 = ind.iota(vertex(data, l1, m1, n1), ((n1, s1),), ((l1, s1), (m1, s1)))
        T2 = ind.iota(vertex(data, l2, m2, n2), ((n2, s2),), ((l2, s2), (m2, s2)))
        prod = ind.relative_product(psis[summ[i]].adjoint(), psis[summ[j]].adjoint())
        X = T2.adjoint() @ prod @ T1 @ psis[summ[k]]
        other = np.sqrt(d[l1] * d[m1] / (dt * d[n1])) * ind.left_inverse(X)
        worst = max(worst, abs(np.conj(v) - other))
    return float(worst)
