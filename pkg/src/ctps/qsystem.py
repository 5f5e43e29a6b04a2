"""Q-systems (theta, w, w1) inside a skeletal category.

theta is a strand of simple summands ``summands[i]`` (repeats allowed).  The
comultiplication ``w1 in Hom(theta, theta theta)`` is stored as
``mult[(l, m, n)]``: the coefficient of the tree ``T_{L_l L_m}^{L_n}`` that
sends summand n into the pair (l, m).  ``w`` is the isometric inclusion of the
unique unit summand.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import least_squares

from .fusion_ring import StructuralError
from .morphism import Morphism, braid, identity, inclusion, tree_index, trees
from .skeletal import DERIVED_TOL, SkeletalData

MAX_RESTARTS = 200


@dataclass
class QSystem:
    data: SkeletalData
    summands: tuple[int, ...]
    mult: dict = field(default_factory=dict)

    def __post_init__(self):
        self.summands = tuple(int(s) for s in self.summands)
        units = [i for i, s in enumerate(self.summands) if s == 0]
        if len(units) != 1:
            raise StructuralError(f"theta must contain the unit exactly once, found {len(units)}")
        ring = self.data.ring
        for s in self.summands:
            if not 0 <= s < ring.rank:
                raise StructuralError(f"summand label {s} out of range")
        clean = {}
        for key, v in self.mult.items():
            l, m, n = (int(i) for i in key)
            if not all(0 <= i < len(self.summands) for i in (l, m, n)):
                raise StructuralError(f"mult index {key} out of range")
            L = self.summands
            if not ring.admissible(L[l], L[m], L[n]):
                raise StructuralError(f"mult entry {key} sits on an inadmissible channel")
            clean[(l, m, n)] = complex(v)
        self.mult = clean

    @property
    def unit_index(self) -> int:
        return self.summands.index(0)

    @property
    def strand(self):
        return self.summands

    @property
    def obj(self):
        return (self.summands,)

    @property
    def dtheta(self) -> float:
        return float(sum(self.data.dims[s] for s in self.summands))

    @property
    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for s in self.summands:
            out[s] = out.get(s, 0) + 1
        return dict(sorted(out.items()))

    def unit(self) -> Morphism:
        """``w in Hom(id, theta)``."""
        m = inclusion(self.data, self.summands, self.unit_index)
        return Morphism(self.data, (), self.obj, {0: m.blocks[0]})

    def comult(self) -> Morphism:
        """``w1 in Hom(theta, theta theta)`` as a Morphism."""
        data = self.data
        th = self.obj
        out = Morphism(data, th, th + th)
        ti2, ti1 = tree_index(data, th + th), tree_index(data, th)
        L = self.summands
        for (l, m, n), v in self.mult.items():
            c = L[n]
            out.blocks[c][ti2[c][((l, m), (L[l], c))], ti1[c][((n,), (c,))]] += v
        return out

    def multiplication(self) -> Morphism:
        return self.comult().H


def admissible_triples(data, summands) -> list[tuple[int, int, int]]:
    ring = data.ring
    k = len(summands)
    return [(l, m, n) for l in range(k) for m in range(k) for n in range(k)
            if ring.admissible(summands[l], summands[m], summands[n])]


def trivial_qsystem(data) -> QSystem:
    return QSystem(data, (0,), {(0, 0, 0): 1.0})


@dataclass
class QReport:
    residuals: dict[str, float]
    threshold: float

    @property
    def passed(self) -> bool:
        return all(v < self.threshold for v in self.residuals.values())

    def failing(self) -> list[str]:
        return [k for k, v in self.residuals.items() if not v < self.threshold]

    def to_dict(self) -> dict:
        return {"passed": self.passed, "threshold": self.threshold,
                "residuals": {k: self.residuals[k] for k in sorted(self.residuals)}}


def verify_qsystem(Q: QSystem, data=None, tol: float = DERIVED_TOL, commutative: bool = False) -> QReport:
    """Longo's relations assembled as morphisms in the tree calculus."""
    data = Q.data if data is None else data
    if data is not Q.data:
        Q = QSystem(data, Q.summands, Q.mult)
    th = Q.obj
    one = identity(data, th)
    D, w = Q.comult(), Q.unit()
    dt = Q.dtheta
    s = dt ** -0.5
    res = {}
    q1a = (w.H.tensor(one)) @ D
    q1b = (one.tensor(w.H)) @ D
    res["Q1"] = max((q1a - one * s).norm(), (q1b - one * s).norm())
    res["Q2"] = ((D.tensor(one)) @ D - (one.tensor(D)) @ D).norm()
    res["Q3"] = (D @ D.H - (one.tensor(D.H)) @ (D.tensor(one))).norm()
    res["isometry"] = (D.H @ D - one).norm()
    if commutative:
        res["commutative"] = (braid(data, th, th) @ D - D).norm()
    return QReport(res, tol)


# -- coefficient form ------------------------------------------------------------

def coefficient_residuals(summands, mult: dict, dims, fsym: Callable, admissible: Callable,
                          rsym: Callable | None = None) -> dict[str, float]:
    """Q1, Q2, Q3, isometry (and braiding symmetry if ``rsym``) on raw coefficients.

    Q2 compares ``sum_s mult[l,m,s] mult[s,k,n]`` with the F-transport of
    ``sum_s mult[m,k,s] mult[l,s,n]``; Q3 compares ``sum_s mult[l,m,s] conj(mult[n,k,s])``
    with ``sum_s mult[l,s,n] conj(F[L_n, L_m]) conj(mult[s,k,m])``.
    """
    L = list(summands)
    K = len(L)
    dt = sum(dims[x] for x in L)
    u = L.index(0)
    g = lambda l, m, n: mult.get((l, m, n), 0.0)
    by_label: dict[int, list[int]] = {}
    for i, x in enumerate(L):
        by_label.setdefault(x, []).append(i)

    # triples grouped for speed
    into: dict[int, list[tuple[int, int]]] = {n: [] for n in range(K)}   # n -> (l, m)
    for (l, m, n), v in mult.items():
        if v != 0:
            into[n].append((l, m))

    q1 = 0.0
    for m in range(K):
        for n in range(K):
            want = dt ** -0.5 if m == n else 0.0
            q1 = max(q1, abs(g(u, m, n) - want), abs(g(m, u, n) - want))

    iso = 0.0
    for n in range(K):
        for s in by_label[L[n]]:
            tot = sum(np.conj(g(l, m, s)) * g(l, m, n) for (l, m) in into[n])
            iso = max(iso, abs(tot - (1.0 if s == n else 0.0)))

    q2 = 0.0
    for l in range(K):
        for m in range(K):
            for k in range(K):
                for n in range(K):
                    a, b, c, d = L[l], L[m], L[k], L[n]
                    lhs: dict[int, complex] = {}
                    for s in range(K):
                        e = L[s]
                        if admissible(a, b, e) and admissible(e, c, d):
                            lhs[e] = lhs.get(e, 0.0) + g(l, m, s) * g(s, k, n)
                    right: dict[int, complex] = {}
                    for s in range(K):
                        f = L[s]
                        if admissible(b, c, f) and admissible(a, f, d):
                            right[f] = right.get(f, 0.0) + g(m, k, s) * g(l, s, n)
                    es = set(lhs) | {e for e in set(L) if admissible(a, b, e) and admissible(e, c, d)}
                    for e in es:
                        rhs = sum(fsym(a, b, c, d, e, f) * v for f, v in right.items())
                        q2 = max(q2, abs(lhs.get(e, 0.0) - rhs))

    q3 = 0.0
    for l in range(K):
        for m in range(K):
            c_ = [c for c in range(len(dims)) if admissible(L[l], L[m], c)]
            for c in c_:
                for n in range(K):
                    for k in range(K):
                        if not admissible(L[n], L[k], c):
                            continue
                        lhs = sum(g(l, m, s) * np.conj(g(n, k, s)) for s in by_label.get(c, []))
                        rhs = 0.0
                        for s in range(K):
                            if (l, s, n) in mult and (s, k, m) in mult:
                                rhs += (g(l, s, n) * np.conj(fsym(L[l], L[s], L[k], c, L[n], L[m]))
                                        * np.conj(g(s, k, m)))
                        q3 = max(q3, abs(lhs - rhs))
    res = {"Q1": float(q1), "Q2": float(q2), "Q3": float(q3), "isometry": float(iso)}
    if rsym is not None:
        br = 0.0
        for (l, m, n), v in mult.items():
            br = max(br, abs(g(m, l, n) - rsym(L[l], L[m], L[n]) * v))
        res["braiding"] = float(br)
    return res


def coefficient_report(Q: QSystem, tol: float = DERIVED_TOL, braiding: bool = False) -> QReport:
    data = Q.data
    res = coefficient_residuals(Q.summands, Q.mult, data.dims, data.fsym, data.ring.admissible,
                                data.rsym if braiding else None)
    return QReport(res, tol)


# -- solver ----------------------------------------------------------------------

@dataclass
class NoSolution:
    summands: tuple[int, ...]
    best_residual: float
    restarts: int
    message: str = "no Q-system found (numerical)"

    @property
    def passed(self) -> bool:
        return False


def _pinned(summands, triples, dt):
    u = summands.index(0)
    fixed, free = {}, []
    for t in triples:
        l, m, n = t
        if l == u:
            fixed[t] = dt ** -0.5 if m == n else 0.0
        elif m == u:
            fixed[t] = dt ** -0.5 if l == n else 0.0
        else:
            free.append(t)
    return fixed, free


def solve_qsystem(data, multiplicities, *, seed: int = 0, tol: float = DERIVED_TOL,
                  restarts: int = MAX_RESTARTS, commutative: bool = False):
    """Multi-start least squares over the free coefficients of w1.

    ``multiplicities`` maps label -> n_lambda (or is a sequence of summand
    labels).  Returns a QSystem passing ``tol`` or a NoSolution value.
    """
    if isinstance(multiplicities, dict):
        summands = tuple(lab for lab, k in sorted(multiplicities.items()) for _ in range(int(k)))
    else:
        summands = tuple(int(x) for x in multiplicities)
    if summands.count(0) != 1:
        raise StructuralError("theta must contain the unit with multiplicity exactly 1")
    if summands == (0,):
        return trivial_qsystem(data)
    dt = sum(data.dims[s] for s in summands)
    triples = admissible_triples(data, summands)
    fixed, free = _pinned(summands, triples, dt)
    adm, dims = data.ring.admissible, data.dims
    rsym = data.rsym if commutative else None

    def assemble(x):
        mult = dict(fixed)
        for i, t in enumerate(free):
            mult[t] = complex(x[2 * i], x[2 * i + 1])
        return mult

    def lin_res(x):
        mult = assemble(x)
        return _residual_vector(summands, mult, data.fsym, adm, dims, rsym)

    rng = np.random.default_rng(seed)
    best = math.inf
    for attempt in range(restarts):
        x0 = rng.normal(scale=dt ** -0.5, size=2 * len(free))
        sol = least_squares(lin_res, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
        mult = {t: v for t, v in assemble(sol.x).items() if abs(v) > 0}
        Q = QSystem(data, summands, mult)
        rep = coefficient_report(Q, tol, braiding=commutative)
        worst = max(rep.residuals.values())
        best = min(best, worst)
        if rep.passed:
            return Q
    return NoSolution(summands, best, restarts)


def _residual_vector(summands, mult, fsym, adm, dims, rsym=None) -> np.ndarray:
    """Stacked real/imag differences of Q2, Q3 and the isometry relation."""
    L = list(summands)
    K = len(L)
    g = lambda l, m, n: mult.get((l, m, n), 0.0)
    out = []
    for n in range(K):
        for s in range(K):
            if L[s] != L[n]:
                continue
            tot = sum(np.conj(g(l, m, s)) * g(l, m, n) for l in range(K) for m in range(K))
            out.append(tot - (1.0 if s == n else 0.0))
    for l in range(K):
        for m in range(K):
            for k in range(K):
                for n in range(K):
                    a, b, c, d = L[l], L[m], L[k], L[n]
                    right: dict[int, complex] = {}
                    for s in range(K):
                        f = L[s]
                        if adm(b, c, f) and adm(a, f, d):
                            right[f] = right.get(f, 0.0) + g(m, k, s) * g(l, s, n)
                    for e in sorted(set(L)):
                        if not (adm(a, b, e) and adm(e, c, d)):
                            continue
                        lhs = sum(g(l, m, s) * g(s, k, n) for s in range(K) if L[s] == e)
                        rhs = sum(fsym(a, b, c, d, e, f) * v for f, v in right.items())
                        out.append(lhs - rhs)
    for l in range(K):
        for m in range(K):
            for n in range(K):
                for k in range(K):
                    for c in range(len(dims)):
                        if not (adm(L[l], L[m], c) and adm(L[n], L[k], c)):
                            continue
                        lhs = sum(g(l, m, s) * np.conj(g(n, k, s)) for s in range(K) if L[s] == c)
                        rhs = sum(g(l, s, n) * np.conj(fsym(L[l], L[s], L[k], c, L[n], L[m])) * np.conj(g(s, k, m))
                                  for s in range(K))
                        out.append(lhs - rhs)
    if rsym is not None:
        for (l, m, n), v in mult.items():
            out.append(g(m, l, n) - rsym(L[l], L[m], L[n]) * v)
    z = np.asarray(out, dtype=complex)
    return np.concatenate([z.real, z.imag])
