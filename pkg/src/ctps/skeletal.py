"""Skeletal F/R data, its validators, and the duality calculus built on it.

Index conventions are documented in :mod:`ctps.morphism`.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .fusion_ring import FusionRing, StructuralError
from .morphism import Morphism, Obj, identity, obj, trees

STRUCTURAL_TOL = 1e-10
DERIVED_TOL = 1e-9


class SkeletalData:
    """A multiplicity-free unitary braided fusion category in a fixed gauge."""

    def __init__(self, ring: FusionRing, F: dict, R: dict | None = None):
        if not ring.multiplicity_free:
            raise StructuralError("skeletal data requires a multiplicity-free ring")
        self.ring = ring
        self.F = {tuple(int(i) for i in k): complex(v) for k, v in F.items()}
        self.R = None if R is None else {tuple(int(i) for i in k): complex(v) for k, v in R.items()}
        self._cache: dict = {}

    @property
    def braided(self) -> bool:
        return self.R is not None

    def fsym(self, a, b, c, d, e, f) -> complex:
        return self.F.get((a, b, c, d, e, f), 0.0)

    def rsym(self, a, b, c) -> complex:
        if self.R is None:
            raise StructuralError("no braiding data (R-symbols) present")
        return self.R.get((a, b, c), 0.0)

    @property
    def dims(self) -> np.ndarray:
        return self.ring.dims

    def dual(self, a: int) -> int:
        return self.ring.dual[a]


class ProductData(SkeletalData):
    """Deligne product ``C1 x C2`` (second factor optionally complex conjugated).

    The pair ``(a1, a2)`` has index ``a1 * n2 + a2``.  With ``conjugate=True``
    the second factor carries ``conj(F)`` and ``conj(R)``: this is the
    category of the opposite algebra, with basis ``(T_e^*)^opp``.
    """

    def __init__(self, left: SkeletalData, right: SkeletalData, conjugate: bool = True):
        r1, r2 = left.ring, right.ring
        n1, n2 = r1.rank, r2.rank
        N = np.einsum("ace,bdf->abcdef", r1.N, r2.N).reshape(n1 * n2, n1 * n2, n1 * n2)
        dual = tuple(r1.dual[i] * n2 + r2.dual[j] for i in range(n1) for j in range(n2))
        dims = np.kron(r1.dims, r2.dims)
        names = tuple(f"({x},{y})" for x in r1.names for y in r2.names)
        S = T = None
        if r1.S is not None and r2.S is not None:
            S2 = r2.S.conj() if conjugate else r2.S
            T2 = r2.T.conj() if conjugate else r2.T
            S, T = np.kron(r1.S, S2), np.kron(r1.T, T2)
        ring = FusionRing(names, N, dual, dims, S, T)
        self.ring = ring
        self.left, self.right, self.conjugate = left, right, conjugate
        self.n2 = n2
        self.F = None
        self.R = {} if (left.braided and right.braided) else None
        self._cache = {}

    def split(self, a: int) -> tuple[int, int]:
        return divmod(a, self.n2)

    def pair(self, a1: int, a2: int) -> int:
        return a1 * self.n2 + a2

    def fsym(self, a, b, c, d, e, f):
        n2 = self.n2
        v1 = self.left.fsym(a // n2, b // n2, c // n2, d // n2, e // n2, f // n2)
        if v1 == 0:
            return 0.0
        v2 = self.right.fsym(a % n2, b % n2, c % n2, d % n2, e % n2, f % n2)
        return v1 * (np.conj(v2) if self.conjugate else v2)

    def rsym(self, a, b, c):
        n2 = self.n2
        v2 = self.right.rsym(a % n2, b % n2, c % n2)
        return self.left.rsym(a // n2, b // n2, c // n2) * (np.conj(v2) if self.conjugate else v2)


# -- enumeration helpers -------------------------------------------------------

def f_tuples(ring: FusionRing) -> Iterator[tuple[int, int, int, int, int, int]]:
    """All admissible (a, b, c, d, e, f)."""
    ch = ring.channels
    n = ring.rank
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for e in ch[a][b]:
                    for d in ch[e][c]:
                        for f in ch[b][c]:
                            if ring.admissible(a, f, d):
                                yield a, b, c, d, e, f


def f_block(data: SkeletalData, a, b, c, d):
    """``F^{abc}_d`` as a matrix with row labels e and column labels f."""
    ring = data.ring
    es = [e for e in ring.channels[a][b] if ring.admissible(e, c, d)]
    fs = [f for f in ring.channels[b][c] if ring.admissible(a, f, d)]
    M = np.array([[data.fsym(a, b, c, d, e, f) for f in fs] for e in es], dtype=complex).reshape(len(es), len(fs))
    return es, fs, M


# -- validators ----------------------------------------------------------------

@dataclass
class ResidualReport:
    name: str
    residual: float
    threshold: float
    instances: int = 0
    worst_instance: tuple | None = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.residual < self.threshold

    def to_dict(self) -> dict:
        return {"name": self.name, "residual": self.residual, "threshold": self.threshold,
                "passed": self.passed, "instances": self.instances}


def _require_entries(data: SkeletalData):
    if isinstance(data, ProductData):
        return
    for t in f_tuples(data.ring):
        if t not in data.F:
            raise StructuralError(f"missing F entry for admissible tuple {t}")
    for key in data.F:
        if not all(0 <= i < data.ring.rank for i in key):
            raise StructuralError(f"F entry {key} out of range")


def check_pentagon(data: SkeletalData, tol: float = STRUCTURAL_TOL) -> ResidualReport:
    """max | F^{abp}_e[x,q] F^{xcd}_e[y,p] - sum_z F^{abc}_y[x,z] F^{azd}_e[y,q] F^{bcd}_q[z,p] |."""
    _require_entries(data)
    ring = data.ring
    ch, adm, F = ring.channels, ring.admissible, data.fsym
    n = ring.rank
    worst, where, count = 0.0, None, 0
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    for x in ch[a][b]:
                        for y in ch[x][c]:
                            for e in ch[y][d]:
                                for p in ch[c][d]:
                                    if not adm(x, p, e):
                                        continue
                                    for q in ch[b][p]:
                                        if not adm(a, q, e):
                                            continue
                                        lhs = F(a, b, p, e, x, q) * F(x, c, d, e, y, p)
                                        rhs = 0.0
                                        for z in ch[b][c]:
                                            if adm(a, z, y) and adm(z, d, q):
                                                rhs += F(a, b, c, y, x, z) * F(a, z, d, e, y, q) * F(b, c, d, q, z, p)
                                        r = abs(lhs - rhs)
                                        count += 1
                                        if r > worst:
                                            worst, where = r, (a, b, c, d, e, x, y, p, q)
    return ResidualReport("pentagon", worst, tol, count, where)


def check_hexagon(data: SkeletalData, sign: int = +1, tol: float = STRUCTURAL_TOL) -> ResidualReport:
    """Hexagon for ``c_{a,bc} = (1 c_{a,c})(c_{a,b} 1)``; ``sign=-1`` uses the reverse braiding."""
    if not data.braided:
        raise StructuralError("no braiding data (R-symbols) present")
    _require_entries(data)
    ring = data.ring
    ch, adm, F = ring.channels, ring.admissible, data.fsym
    if sign > 0:
        R = data.rsym
    else:
        def R(x, y, z):
            return np.conj(data.rsym(y, x, z))
    n = ring.rank
    worst, where, count = 0.0, None, 0
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in set(d for e in ch[a][b] for d in ch[e][c]):
                    es = [e for e in ch[a][b] if adm(e, c, d)]
                    gs = [g for g in ch[a][c] if adm(b, g, d)]
                    hs = [h for h in ch[b][c] if adm(h, a, d)]
                    for f in hs:
                        if not adm(a, f, d):
                            continue
                        for h in hs:
                            rhs = 0.0
                            for e in es:
                                for g in gs:
                                    rhs += (F(a, b, c, d, e, f) * R(a, b, e) * np.conj(F(b, a, c, d, e, g))
                                            * R(a, c, g) * F(b, c, a, d, h, g))
                            lhs = R(a, f, d) if h == f else 0.0
                            r = abs(lhs - rhs)
                            count += 1
                            if r > worst:
                                worst, where = r, (a, b, c, d, f, h)
    for key, v in data.R.items() if not isinstance(data, ProductData) else []:
        if abs(abs(v) - 1) > worst:
            worst, where = abs(abs(v) - 1), key
    return ResidualReport(f"hexagon{'+' if sign > 0 else '-'}", worst, tol, count, where)


def check_unitarity(data: SkeletalData, tol: float = STRUCTURAL_TOL) -> ResidualReport:
    _require_entries(data)
    ring = data.ring
    n = ring.rank
    worst, where, count = 0.0, None, 0
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    es, fs, M = f_block(data, a, b, c, d)
                    if not es and not fs:
                        continue
                    count += 1
                    if len(es) != len(fs):
                        return ResidualReport("unitarity", float("inf"), tol, count, (a, b, c, d))
                    r = float(np.abs(M @ M.conj().T - np.eye(len(es))).max())
                    if r > worst:
                        worst, where = r, (a, b, c, d)
    return ResidualReport("unitarity", worst, tol, count, where)


def check_unit_gauge(data: SkeletalData, tol: float = STRUCTURAL_TOL) -> ResidualReport:
    """F with a unit among a, b, c equals 1; R with a unit equals 1."""
    worst, where, count = 0.0, None, 0
    for t in f_tuples(data.ring):
        if 0 in t[:3]:
            count += 1
            r = abs(data.fsym(*t) - 1)
            if r > worst:
                worst, where = r, t
    if data.braided:
        for a in range(data.ring.rank):
            for key in ((0, a, a), (a, 0, a)):
                count += 1
                r = abs(data.rsym(*key) - 1)
                if r > worst:
                    worst, where = r, key
    return ResidualReport("unit_gauge", worst, tol, count, where)


def validate_skeletal(data: SkeletalData, tol: float = STRUCTURAL_TOL) -> list[ResidualReport]:
    reps = [check_unit_gauge(data, tol), check_unitarity(data, tol), check_pentagon(data, tol)]
    if data.braided:
        reps += [check_hexagon(data, +1, tol), check_hexagon(data, -1, tol)]
    return reps


# -- duality -------------------------------------------------------------------

@dataclass(frozen=True)
class StandardPair:
    """``R_a = cup`` (coefficient 1) and ``Rbar_a = phase * cup`` in the tree basis."""

    label: int
    phase: complex
    residual_left: float
    residual_right: float


def cup(data: SkeletalData, a: int) -> Morphism:
    """``R_a in Hom(id, abar a)``."""
    ab = data.dual(a)
    return Morphism(data, (), obj(ab, a), {0: np.ones((1, 1))})


def cupbar(data: SkeletalData, a: int) -> Morphism:
    """``Rbar_a in Hom(id, a abar)``, phased so the conjugate equations hold with +1/d."""
    ab = data.dual(a)
    return Morphism(data, (), obj(a, ab), {0: np.full((1, 1), standard_phase(data, a))})


def standard_phase(data: SkeletalData, a: int) -> complex:
    memo = data._cache.setdefault("std_phase", {})
    if a not in memo:
        ab = data.dual(a)
        f00 = data.fsym(a, ab, a, a, 0, 0)
        if abs(f00) == 0:
            raise StructuralError(f"F^{{{a},{ab},{a}}}_{a}[0,0] vanishes")
        memo[a] = 1.0 / (data.dims[a] * np.conj(f00))
    return memo[a]


def standard_solutions(data: SkeletalData, tol: float = STRUCTURAL_TOL) -> list[StandardPair]:
    """Standard pairs for every label, with both conjugate-equation residuals.

    Raises when no single phase satisfies both equations (bad F data).
    """
    out = []
    for a in range(data.ring.rank):
        ab = data.dual(a)
        d = data.dims[a]
        R, Rb = cup(data, a), cupbar(data, a)
        ph = standard_phase(data, a)
        if abs(abs(ph) - 1) > 1e-8:
            raise StructuralError(f"label {a}: |F[0,0]| != 1/d, cannot normalize cups")
        e1 = identity(data, obj(a)).tensor(R.H) @ Rb.tensor(identity(data, obj(a)))
        e2 = identity(data, obj(ab)).tensor(Rb.H) @ R.tensor(identity(data, obj(ab)))
        r1 = abs(e1.blocks[a][0, 0] - 1 / d)
        r2 = abs(e2.blocks[ab][0, 0] - 1 / d)
        if max(r1, r2) > tol:
            raise StructuralError(f"label {a}: no consistent normalization of the conjugate equations")
        out.append(StandardPair(a, ph, float(r1), float(r2)))
    return out


def left_inverse(data: SkeletalData, lam: int, x: Morphism) -> Morphism:
    """``Phi_lam(x) = (R^* x 1)(1_lambar x x)(R x 1)`` for ``x: lam rho -> lam tau``."""
    if not x.dom or not x.cod or x.dom[0] != (lam,) or x.cod[0] != (lam,):
        raise ValueError(f"left_inverse expects morphisms lam rho -> lam tau with lam = {lam}")
    rho, tau = x.dom[1:], x.cod[1:]
    R = cup(data, lam)
    lb = obj(data.dual(lam))
    return R.H.tensor(identity(data, tau)) @ identity(data, lb).tensor(x) @ R.tensor(identity(data, rho))


def right_inverse(data: SkeletalData, lam: int, x: Morphism) -> Morphism:
    """``Psi_lam(x) = (1 x Rbar^*)(x x 1_lambar)(1 x Rbar)`` for ``x: rho lam -> tau lam``."""
    if not x.dom or x.dom[-1] != (lam,) or x.cod[-1] != (lam,):
        raise ValueError("right_inverse expects morphisms rho lam -> tau lam")
    rho, tau = x.dom[:-1], x.cod[:-1]
    Rb = cupbar(data, lam)
    lb = obj(data.dual(lam))
    return identity(data, tau).tensor(Rb.H) @ x.tensor(identity(data, lb)) @ identity(data, rho).tensor(Rb)


def left_inverse_word(data: SkeletalData, x: Morphism, n: int | None = None) -> Morphism:
    """Close the first ``n`` (default: all) simple strands from the left."""
    n = len(x.dom) if n is None else n
    for _ in range(n):
        if len(x.dom[0]) != 1 or x.dom[0] != x.cod[0]:
            raise ValueError("left_inverse_word needs matching simple leading strands")
        x = left_inverse(data, x.dom[0][0], x)
    return x


def scalar(m: Morphism) -> complex:
    """Value of an endomorphism of the unit object."""
    if m.dom or m.cod:
        raise ValueError("not an endomorphism of the unit")
    return complex(m.blocks[0][0, 0])


def object_dim(data: SkeletalData, X: Obj) -> float:
    return float(np.prod([sum(data.dims[a] for a in s) for s in X])) if X else 1.0


# -- recoupling ----------------------------------------------------------------

def recouple(data: SkeletalData, kind: str, *labels: int):
    """Unitary basis changes used by the coefficient-form checks.

    ``kind="assoc", (a, b, c, d)``: rows e, cols f, entry ``<(T_e x 1)T | (1 x T_f)T>``
    between the two bases of Hom(d, abc) -- the F-block.

    ``kind="H", (lam, mu, nu, kap)``: rows c, cols s, the matrix relating
    ``sqrt(d_mu/d_c) T_c T_c^*`` and ``sqrt(d_s/d_nu) (1 x T_g^*)(T_h x 1)`` in
    Hom(nu kap, lam mu), orthonormal for the trace inner product.
    Returns (row labels, column labels, matrix).
    """
    ring = data.ring
    if kind == "assoc":
        a, b, c, d = labels
        es, fs, M = f_block(data, a, b, c, d)
        if not es:
            raise ValueError(f"inadmissible tuple {labels}")
        return es, fs, M
    if kind == "H":
        lam, mu, nu, kap = labels
        cs = [c for c in ring.channels[lam][mu] if ring.admissible(nu, kap, c)]
        ss = [s for s in ring.channels[data.dual(lam)][nu]
              if ring.admissible(s, kap, mu) and ring.admissible(lam, s, nu)]
        if not cs:
            raise ValueError(f"inadmissible tuple {labels}")
        d = data.dims
        M = np.array([[np.sqrt(d[c] * d[s] / (d[nu] * d[mu])) * np.conj(data.fsym(lam, s, kap, c, nu, mu))
                       for s in ss] for c in cs], dtype=complex)
        return cs, ss, M
    raise ValueError(f"unknown recoupling kind {kind!r}")


def hmove_operator(data: SkeletalData, lam, mu, nu, kap, s) -> Morphism:
    """``(1_lam x T_{s kap}^{mu *})(T_{lam s}^{nu} x 1_kap)`` built diagrammatically."""
    from .morphism import vertex
    Th = vertex(data, lam, s, nu).tensor(identity(data, obj(kap)))
    Tg = identity(data, obj(lam)).tensor(vertex(data, s, kap, mu).H)
    return Tg @ Th


# -- modular data from the braiding ---------------------------------------------

def twists(data: SkeletalData) -> np.ndarray:
    ring = data.ring
    d = ring.dims
    return np.array([sum(d[c] * data.rsym(a, a, c) for c in ring.channels[a][a]) / d[a]
                     for a in range(ring.rank)])


def modular_from_braiding(data: SkeletalData) -> tuple[np.ndarray, np.ndarray, float]:
    """(S, T-diagonal, central charge mod 8) computed from R-symbols."""
    ring = data.ring
    d = ring.dims
    th = twists(data)
    n = ring.rank
    D = np.sqrt(ring.global_dim)
    S = np.zeros((n, n), dtype=complex)
    for a in range(n):
        for b in range(n):
            ab = ring.dual[a]
            S[a, b] = sum(d[c] * th[c] / (th[a] * th[b]) for c in ring.channels[ab][b]) / D
    gauss = np.sum(d ** 2 * th) / D
    c = (8 * cmath.phase(gauss) / (2 * np.pi)) % 8
    T = th * np.exp(-2j * np.pi * c / 24)
    return S, T, float(c)
