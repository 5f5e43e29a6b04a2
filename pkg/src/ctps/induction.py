"""alpha-induction realized by free bimodules A (x) lambda over a Q-system A.

A signed word ``((lam1, s1), ..., (lamn, sn))`` stands for the relative tensor
product of the induced bimodules ``alpha^{s_i}_{lam_i}``, modeled on the object
``A lam1 ... lamn``.  The left action multiplies on the A strand; the right
action carries the incoming A strand leftwards across every lam_i, over
(``c_{lam,A}``) for ``+`` and under (``c_{A,lam}^{-1}``) for ``-``, then multiplies.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .fusion_ring import StructuralError
from .morphism import Morphism, braid, braid_inv, hom_basis, identity, obj, vertex
from .qsystem import QSystem, verify_qsystem
from .skeletal import DERIVED_TOL, cup, cupbar

GAP_RATIO = 1e3
ZERO_TOL = 1e-8

Word = tuple[tuple[int, str], ...]


class UncertifiedDimension(RuntimeError):
    """Singular values of a Hom solve do not separate into zero / nonzero clusters."""


def _sign(s) -> str:
    if s in ("+", 1, "plus"):
        return "+"
    if s in ("-", -1, "minus"):
        return "-"
    raise ValueError(f"sign must be '+' or '-', got {s!r}")


def parse_signs(spec) -> tuple[str, str]:
    if isinstance(spec, str):
        if len(spec) != 2:
            raise ValueError(f"sign pair must look like '+-', got {spec!r}")
        spec = tuple(spec)
    a, b = spec
    return _sign(a), _sign(b)


# -- module structure --------------------------------------------------------------

class Induction:
    """Bimodule calculus over a fixed Q-system; caches the primitive morphisms."""

    def __init__(self, Q: QSystem, check: bool = True, tol: float = DERIVED_TOL):
        if check:
            rep = verify_qsystem(Q, tol=tol)
            if not rep.passed:
                raise StructuralError(f"Q-system fails verification: {rep.failing()}")
        self.Q = Q
        self.data = Q.data
        if not self.data.braided:
            raise StructuralError("alpha-induction needs braiding data")
        self.A = Q.obj
        self.dA = Q.dtheta
        self.m = Q.multiplication()
        self.eta = Q.unit() * np.sqrt(self.dA)
        self._memo: dict = {}

    def object(self, word: Word):
        return self.A + tuple((lab,) for lab, _ in word)

    def dim(self, word: Word) -> float:
        d = self.data.dims
        return float(np.prod([d[lab] for lab, _ in word])) if word else 1.0

    def _cross(self, word: Word) -> Morphism:
        """``word A -> A word``, sign by sign."""
        key = ("cross", word)
        if key in self._memo:
            return self._memo[key]
        data, A = self.data, self.A
        if not word:
            out = identity(data, A)
        else:
            (lab, s), rest = word[0], word[1:]
            first = identity(data, obj(lab)).tensor(self._cross(rest))
            step = braid(data, obj(lab), A) if s == "+" else braid_inv(data, obj(lab), A)
            out = step.tensor(identity(data, tuple((x,) for x, _ in rest))) @ first
        self._memo[key] = out
        return out

    def left_action(self, word: Word) -> Morphism:
        key = ("left", word)
        if key not in self._memo:
            rest = tuple((lab,) for lab, _ in word)
            self._memo[key] = self.m.tensor(identity(self.data, rest))
        return self._memo[key]

    def right_action(self, word: Word) -> Morphism:
        key = ("right", word)
        if key not in self._memo:
            rest = tuple((lab,) for lab, _ in word)
            self._memo[key] = (self.m.tensor(identity(self.data, rest))
                               @ identity(self.data, self.A).tensor(self._cross(word)))
        return self._memo[key]

    # -- maps ----------------------------------------------------------------
    def free_map(self, f: Morphism, src: Word, tgt: Word) -> "BimoduleMap":
        """``(m x 1)(1_A x f)`` for ``f: src -> A tgt``."""
        rest = tuple((lab,) for lab, _ in tgt)
        phi = self.m.tensor(identity(self.data, rest)) @ identity(self.data, self.A).tensor(f)
        return BimoduleMap(self, phi, tuple(src), tuple(tgt))

    def iota(self, T: Morphism, src: Word, tgt: Word) -> "BimoduleMap":
        return BimoduleMap(self, identity(self.data, self.A).tensor(T), tuple(src), tuple(tgt))

    def identity_map(self, word: Word) -> "BimoduleMap":
        return BimoduleMap(self, identity(self.data, self.object(word)), word, word)

    def intertwining_residual(self, phi: "BimoduleMap") -> float:
        """Left- and right-module constraint violation of ``phi``."""
        data = self.data
        M = phi.mor
        one_A = identity(data, self.A)
        r_left = (M @ self.left_action(phi.src) - self.left_action(phi.tgt) @ one_A.tensor(M)).norm()
        r_right = (M @ self.right_action(phi.src) - self.right_action(phi.tgt) @ M.tensor(one_A)).norm()
        return max(r_left, r_right)

    def left_inverse(self, x: "BimoduleMap") -> complex:
        """Standard left-inverse of an endomorphism of an induced word, as a scalar."""
        if x.src != x.tgt:
            raise ValueError("left inverse of a non-endomorphism")
        return x.mor.trace() / (self.dA * self.dim(x.src))

    def inner(self, phi: "BimoduleMap", psi: "BimoduleMap") -> complex:
        return self.left_inverse(phi.adjoint() @ psi)

    def relative_product(self, phi: "BimoduleMap", psi: "BimoduleMap") -> "BimoduleMap":
        """``phi x psi = (1 x_A psi)(phi x_A 1)``."""
        data = self.data
        Y = tuple((lab,) for lab, _ in psi.src)
        Yt = tuple((lab,) for lab, _ in psi.tgt)
        step1 = phi.mor.tensor(identity(data, Y))
        g = psi.mor @ self.eta.tensor(identity(data, Y))
        Xt = self.object(phi.tgt)
        step2 = self.right_action(phi.tgt).tensor(identity(data, Yt)) @ identity(data, Xt).tensor(g)
        return BimoduleMap(self, step2 @ step1, phi.src + psi.src, phi.tgt + psi.tgt)

    # -- Hom spaces -----------------------------------------------------------
    def hom(self, src: Word, tgt: Word, orthonormal: bool = True) -> "HomBasis":
        key = ("hom", src, tgt, orthonormal)
        if key in self._memo:
            return self._memo[key]
        data = self.data
        X = tuple((lab,) for lab, _ in src)
        Ytail = tuple((lab,) for lab, _ in tgt)
        basis = hom_basis(data, X, self.A + Ytail)
        n = len(basis)
        one_A = identity(data, self.A)
        cols = []
        for f in basis:
            phi = self.free_map(f, src, tgt).mor
            c = phi @ self.right_action(src) - self.right_action(tgt) @ phi.tensor(one_A)
            cols.append(c.vector())
        if n == 0:
            hb = HomBasis(src, tgt, [], np.zeros((0, 0)), [], float("inf"))
            self._memo[key] = hb
            return hb
        M = np.array(cols).T if cols[0].size else np.zeros((0, n))
        dim, null, margin = certified_nullspace(M)
        maps = [self.free_map(Morphism.from_vector(data, X, self.A + Ytail, v), src, tgt) for v in null]
        vecs = [v for v in null]
        if orthonormal and maps:
            maps, vecs = self._orthonormalize(maps, vecs, X, Ytail, src, tgt)
        G = np.array([[self.inner(a, b) for b in maps] for a in maps], dtype=complex).reshape(dim, dim)
        hb = HomBasis(src, tgt, maps, G, vecs, margin)
        self._memo[key] = hb
        return hb

    def _orthonormalize(self, maps, vecs, X, Ytail, src, tgt):
        data = self.data
        out_v: list[np.ndarray] = []
        out_m: list[BimoduleMap] = []
        for v, phi in zip(vecs, maps):
            w = v.astype(complex).copy()
            cur = phi
            for u, psi in zip(out_v, out_m):
                w = w - self.inner(psi, cur) * u
                cur = self.free_map(Morphism.from_vector(data, X, self.A + Ytail, w), src, tgt)
            nrm = np.sqrt(self.inner(cur, cur).real)
            w = w / nrm
            mags = np.abs(w)
            j = int(np.flatnonzero(mags >= mags.max() - 1e-9)[0])
            w = w * (abs(w[j]) / w[j])
            cur = self.free_map(Morphism.from_vector(data, X, self.A + Ytail, w), src, tgt)
            out_v.append(w)
            out_m.append(cur)
        return out_m, out_v


@dataclass
class BimoduleMap:
    ind: Induction = field(repr=False)
    mor: Morphism
    src: Word
    tgt: Word

    def __matmul__(self, other: "BimoduleMap") -> "BimoduleMap":
        if other.tgt != self.src:
            raise ValueError(f"cannot compose {other.tgt} into {self.src}")
        return BimoduleMap(self.ind, self.mor @ other.mor, other.src, self.tgt)

    def __add__(self, other):
        return BimoduleMap(self.ind, self.mor + other.mor, self.src, self.tgt)

    def __mul__(self, z):
        return BimoduleMap(self.ind, self.mor * z, self.src, self.tgt)

    __rmul__ = __mul__

    def adjoint(self) -> "BimoduleMap":
        return BimoduleMap(self.ind, self.mor.H, self.tgt, self.src)


@dataclass
class HomBasis:
    src: Word
    tgt: Word
    maps: list
    gram: np.ndarray
    coeffs: list
    margin: float

    @property
    def dim(self) -> int:
        return len(self.maps)

    def gram_residual(self) -> float:
        if not self.dim:
            return 0.0
        return float(np.abs(self.gram - np.eye(self.dim)).max())


def certified_nullspace(M: np.ndarray, gap: float = GAP_RATIO, zero_tol: float = ZERO_TOL):
    """Nullspace of M with a certified singular-value gap.

    Returns (dimension, list of null vectors, margin) where margin is the ratio
    between the smallest "nonzero" and the largest "zero" singular value.
    """
    r, n = M.shape
    if r == 0:
        return n, list(np.eye(n, dtype=complex)), float("inf")
    _, s, Vh = np.linalg.svd(M, full_matrices=True)
    scale = max(1.0, float(s.max()) if s.size else 1.0)
    nonzero = s[s > zero_tol * scale]
    zeros = s[s <= zero_tol * scale]
    rank = len(nonzero)
    zmax = float(zeros.max()) if zeros.size else 0.0
    if rank == 0:
        margin = float("inf")
    else:
        margin = float(nonzero.min()) / max(zmax, 1e-16 * scale)
    if rank and margin < gap:
        raise UncertifiedDimension(f"singular-value gap {margin:.3e} below {gap:g}")
    null = [Vh[i].conj() for i in range(rank, n)]
    return n - rank, null, margin


# -- public operations -----------------------------------------------------------------

@dataclass
class InducedBimodule:
    lam: int
    sign: str
    decomposition: dict[int, int]
    left: Morphism
    right: Morphism
    residuals: dict[str, float]


def alpha_bimodule(Q: QSystem, data=None, lam: int = 0, sign="+", ind: Induction | None = None) -> InducedBimodule:
    ind = ind or Induction(Q if data is None else QSystem(data, Q.summands, Q.mult))
    s = _sign(sign)
    word = ((lam, s),)
    ring = ind.data.ring
    dec: dict[int, int] = {}
    for t in Q.summands:
        for c in ring.channels[t][lam]:
            dec[c] = dec.get(c, 0) + 1
    L, R = ind.left_action(word), ind.right_action(word)
    data = ind.data
    A = ind.A
    one_A = identity(data, A)
    oneX = identity(data, ind.object(word))
    m = ind.m
    lam_o = obj(lam)
    res = {
        "left_assoc": (L @ one_A.tensor(L) - L @ m.tensor(identity(data, A + lam_o))).norm(),
        "right_assoc": (R @ R.tensor(one_A) - R @ oneX.tensor(m)).norm(),
        "bimodule": (L @ one_A.tensor(R) - R @ L.tensor(one_A)).norm(),
        "left_unit": (L @ ind.eta.tensor(oneX) - oneX).norm(),
        "right_unit": (R @ oneX.tensor(ind.eta) - oneX).norm(),
    }
    return InducedBimodule(lam, s, dict(sorted(dec.items())), L, R, res)


def hom_alpha(Q: QSystem, data=None, lam: int = 0, s1="+", mu: int = 0, s2="-",
              ind: Induction | None = None) -> HomBasis:
    ind = ind or Induction(Q if data is None else QSystem(data, Q.summands, Q.mult))
    return ind.hom(((lam, _sign(s1)),), ((mu, _sign(s2)),))


@dataclass
class InductionReport:
    Z: np.ndarray
    signs: tuple[str, str]
    residuals: dict[str, float]
    margins: np.ndarray
    bases: dict = field(repr=False, default_factory=dict)

    def to_dict(self) -> dict:
        return {"signs": "".join(self.signs), "Z": self.Z.astype(int).tolist(),
                "residuals": {k: self.residuals[k] for k in sorted(self.residuals)},
                "min_margin": float(self.margins[np.isfinite(self.margins)].min())
                if np.isfinite(self.margins).any() else None}


def coupling_matrix(Q: QSystem, data=None, signs=("+", "-"), ind: Induction | None = None) -> InductionReport:
    """``Z[lam, mu] = dim Hom(alpha^{s1}_lam, alpha^{s2}_mu)``."""
    ind = ind or Induction(Q if data is None else QSystem(data, Q.summands, Q.mult))
    s1, s2 = parse_signs(signs)
    n = ind.data.ring.rank
    Z = np.zeros((n, n), dtype=np.int64)
    margins = np.full((n, n), np.inf)
    bases = {}
    worst_gram = worst_int = 0.0
    for lam in range(n):
        for mu in range(n):
            hb = ind.hom(((lam, s1),), ((mu, s2),))
            Z[lam, mu] = hb.dim
            margins[lam, mu] = hb.margin
            bases[(lam, mu)] = hb
            worst_gram = max(worst_gram, hb.gram_residual())
            for phi in hb.maps:
                worst_int = max(worst_int, ind.intertwining_residual(phi))
    if Z[0, 0] != 1:
        raise StructuralError(f"Z[0,0] = {Z[0, 0]}; the extension is not irreducible")
    res = {"gram": worst_gram, "intertwining": worst_int}
    ring = ind.data.ring
    if ring.S is not None:
        res.update(modular_residuals(Z, ring.S, ring.T))
    return InductionReport(Z, (s1, s2), res, margins, bases)


def modular_residuals(Z, S, T) -> dict[str, float]:
    Zc = np.asarray(Z, dtype=complex)
    Tm = np.diag(T)
    return {"ZS-SZ": float(np.abs(Zc @ S - S @ Zc).max()),
            "ZT-TZ": float(np.abs(Zc @ Tm - Tm @ Zc).max())}


def modular_invariants(S, T, bound: int = 4, tol: float = 1e-8, max_cases: int = 10 ** 7) -> list[np.ndarray]:
    """All nonnegative-integer Z with Z[0,0]=1, entries <= bound, commuting with S and T.

    Brute force over the entries allowed by T (Z[a,b] = 0 unless T_a = T_b).
    """
    S = np.asarray(S, dtype=complex)
    T = np.asarray(T, dtype=complex)
    n = S.shape[0]
    free = [(a, b) for a in range(n) for b in range(n)
            if abs(T[a] - T[b]) < tol and (a, b) != (0, 0)]
    if (bound + 1) ** len(free) > max_cases:
        raise ValueError(f"{(bound + 1) ** len(free)} cases exceed the enumeration budget")
    out = []
    for vals in itertools.product(range(bound + 1), repeat=len(free)):
        Z = np.zeros((n, n))
        Z[0, 0] = 1
        for (a, b), v in zip(free, vals):
            Z[a, b] = v
        if np.abs(Z @ S - S @ Z).max() < tol:
            out.append(Z.astype(np.int64))
    return out


def check_dimension_preservation(Q: QSystem, data=None, ind: Induction | None = None) -> dict:
    """d(alpha_lam) against d(lam), by trace and by the induced conjugate equations."""
    ind = ind or Induction(Q if data is None else QSystem(data, Q.summands, Q.mult))
    d = ind.data.dims
    out = {}
    worst = 0.0
    for lam in range(ind.data.ring.rank):
        one = identity(ind.data, ind.object(((lam, "+"),)))
        by_trace = one.trace().real / ind.dA
        by_conj, r = induced_dimension(ind, lam, "+")
        out[lam] = (by_conj, float(d[lam]))
        worst = max(worst, abs(by_trace - d[lam]), abs(by_conj - d[lam]), r)
    return {"dims": out, "residual": worst}


def induced_dimension(ind: Induction, lam: int, sign: str = "+") -> tuple[float, float]:
    """d(alpha_lam) from the induced conjugate equations, and their residual.

    With ``r = iota(R_lam)``, ``rb = iota(Rbar_lam)`` the composite
    ``(1 x r^*)(rb x 1)`` must be a scalar c on alpha_lam; then
    d = sqrt(<r, r><rb, rb>) / c.
    """
    s = _sign(sign)
    data = ind.data
    lb = data.dual(lam)
    w, wb = ((lam, s),), ((lb, s),)
    r = ind.iota(cup(data, lam), (), wb + w)
    rb = ind.iota(cupbar(data, lam), (), w + wb)
    X = ind.relative_product(ind.identity_map(w), r.adjoint()) @ ind.relative_product(rb, ind.identity_map(w))
    c = ind.left_inverse(X)
    resid = (X.mor - identity(data, ind.object(w)) * c).norm()
    Y = ind.relative_product(ind.identity_map(wb), rb.adjoint()) @ ind.relative_product(r, ind.identity_map(wb))
    resid = max(resid, abs(ind.left_inverse(Y) - c))
    d = np.sqrt((ind.inner(r, r) * ind.inner(rb, rb)).real) / c.real
    return float(d), float(max(resid, abs(c.imag)))


def _random_element(hb: HomBasis, rng) -> "BimoduleMap | None":
    if not hb.dim:
        return None
    c = rng.normal(size=hb.dim) + 1j * rng.normal(size=hb.dim)
    out = hb.maps[0] * c[0]
    for z, phi in zip(c[1:], hb.maps[1:]):
        out = out + phi * z
    return out


def braiding_map(ind: Induction, lam: int, mu: int, sign: str, kind: str = "over") -> BimoduleMap:
    """``iota(c_{lam,mu})`` (or ``iota(c_{mu,lam}^{-1})``) between signed words."""
    T = braid(ind.data, obj(lam), obj(mu)) if kind == "over" else braid_inv(ind.data, obj(lam), obj(mu))
    return ind.iota(T, ((lam, sign), (mu, sign)), ((mu, sign), (lam, sign)))


def e3_residual(ind: Induction, phi: BimoduleMap, psi: BimoduleMap) -> float:
    """``|(psi x phi) iota(eps(lam1, mu1)) - iota(eps(lam2, mu2)) (phi x psi)|``.

    Both factors use the same braiding eps of C; the sign structure lives in
    the induced words.
    """
    (lam1, s1), = phi.src
    (lam2, s2), = phi.tgt
    (mu1, _), = psi.src
    (mu2, _), = psi.tgt
    lhs = ind.relative_product(psi, phi) @ braiding_map(ind, lam1, mu1, s1)
    rhs = braiding_map(ind, lam2, mu2, s2) @ ind.relative_product(phi, psi)
    return (lhs.mor - rhs.mor).norm()


def check_extension_axioms(Q: QSystem, data=None, signs=("+", "-"), seed: int = 0,
                           ind: Induction | None = None) -> dict[str, float]:
    """E1 (structural), E2 (vertices intertwine), E3 (braiding compatibility).

    E3 is tested on one random element of every nonzero Hom(alpha^{s1}_lam1, alpha^{s2}_lam2)
    against one of every Hom(alpha^{s1}_mu1, alpha^{s2}_mu2).
    """
    ind = ind or Induction(Q if data is None else QSystem(data, Q.summands, Q.mult))
    s1, s2 = parse_signs(signs)
    ring = ind.data.ring
    n = ring.rank
    e2 = 0.0
    for lam in range(n):
        for mu in range(n):
            for nu in ring.channels[lam][mu]:
                for s in sorted({s1, s2}):
                    T = ind.iota(vertex(ind.data, lam, mu, nu), ((nu, s),), ((lam, s), (mu, s)))
                    e2 = max(e2, ind.intertwining_residual(T))
    rng = np.random.default_rng(seed)
    elems = []
    for a in range(n):
        for b in range(n):
            x = _random_element(ind.hom(((a, s1),), ((b, s2),)), rng)
            if x is not None:
                elems.append(x)
    e3 = 0.0
    for phi in elems:
        for psi in elems:
            e3 = max(e3, e3_residual(ind, phi, psi))
    return {"E1": 0.0, "E2": e2, "E3": e3}
