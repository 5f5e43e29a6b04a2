"""Morphisms of a multiplicity-free unitary fusion category in fusion-tree form.

An object is a tuple of strands; a strand is a tuple of simple labels (its
direct summands, repetitions allowed).  ``((1,), (0, 4))`` is the object
``1 (x) (0 + 4)``.  For every total charge ``c`` the isometries

    ((T_{x1 x2}^{b2} (x) 1) T_{b2 x3}^{b3} (x) 1) ... T_{b_{n-1} x_n}^{c}

(one per choice of summands and intermediate labels) form an orthonormal
basis of ``Hom(c, X)``, so a morphism ``X -> Y`` is a dict of matrices
``c -> (trees of Y at c) x (trees of X at c)`` and the adjoint is the
conjugate transpose.

Conventions shared with :mod:`ctps.skeletal`:

* ``F(a, b, c, d, e, f) = <left_e | right_f>`` with
  ``left_e = (T_{ab}^e (x) 1_c) T_{ec}^d`` and ``right_f = (1_a (x) T_{bc}^f) T_{af}^d``.
* ``R(a, b, c)``: ``c_{a,b} T_{ab}^c = R(a, b, c) T_{ba}^c``.
"""
from __future__ import annotations

from typing import Iterable

import numpy as np

Strand = tuple[int, ...]
Obj = tuple[Strand, ...]
Tree = tuple[tuple[int, ...], tuple[int, ...]]


def obj(*labels: int) -> Obj:
    """Object made of simple strands."""
    return tuple((int(a),) for a in labels)


def _cache(cat, name: str) -> dict:
    return cat._cache.setdefault(name, {})


def trees(cat, X: Obj) -> dict[int, list[Tree]]:
    cache = _cache(cat, "trees")
    if X in cache:
        return cache[X]
    if not X:
        res = {0: [((), ())]}
    else:
        prev = trees(cat, X[:-1])
        acc: dict[int, list[Tree]] = {}
        ch = cat.ring.channels
        for b, tl in prev.items():
            for s, bs in tl:
                for i, u in enumerate(X[-1]):
                    for c in ch[b][u]:
                        acc.setdefault(c, []).append((s + (i,), bs + (c,)))
        res = {c: acc[c] for c in sorted(acc)}
    cache[X] = res
    return res


def tree_index(cat, X: Obj) -> dict[int, dict[Tree, int]]:
    cache = _cache(cat, "tree_index")
    if X not in cache:
        cache[X] = {c: {t: i for i, t in enumerate(tl)} for c, tl in trees(cat, X).items()}
    return cache[X]


def _product_basis(cat, X: Obj, U: Obj, c: int):
    """Ordered (a, b, tx, tu) with c in a x b; grouped by (a, b), tx major."""
    tX, tU = trees(cat, X), trees(cat, U)
    out, ranges = [], {}
    for a, la in tX.items():
        for b, lb in tU.items():
            if not cat.ring.admissible(a, b, c):
                continue
            start = len(out)
            out.extend((a, b, tx, tu) for tx in la for tu in lb)
            ranges[(a, b)] = (start, len(out))
    return out, ranges


def _expand(cat, X: Obj, U: Obj, tx: Tree, tu: Tree, c: int) -> dict[Tree, complex]:
    """Left-associated expansion of (v_tx (x) v_tu) T_{ab}^c."""
    memo = _cache(cat, "expand")
    key = (X, U, tx, tu, c)
    if key in memo:
        return memo[key]
    if not U:
        res = {tx: 1.0}
    elif not X:
        res = {tu: 1.0}
    elif len(U) == 1:
        res = {(tx[0] + tu[0], tx[1] + (c,)): 1.0}
    else:
        s, bs = tu
        sub = (s[:-1], bs[:-1])
        beta, b = bs[-2], bs[-1]
        u = U[-1][s[-1]]
        a = tx[1][-1]
        res = {}
        ring = cat.ring
        for g in ring.channels[a][beta]:
            if not ring.admissible(g, u, c):
                continue
            coef = cat.fsym(a, beta, u, c, g, b)
            if coef == 0:
                continue
            for lt, v in _expand(cat, X, U[:-1], tx, sub, g).items():
                t = (lt[0] + (s[-1],), lt[1] + (c,))
                res[t] = res.get(t, 0.0) + coef * v
    memo[key] = res
    return res


def product_matrix(cat, X: Obj, U: Obj, c: int):
    """Unitary change from the product basis of ``X (x) U`` to left trees, at charge c."""
    cache = _cache(cat, "pmat")
    key = (X, U, c)
    if key in cache:
        return cache[key]
    pb, ranges = _product_basis(cat, X, U, c)
    idx = tree_index(cat, X + U).get(c, {})
    M = np.zeros((len(idx), len(pb)), dtype=complex)
    for j, (a, b, tx, tu) in enumerate(pb):
        for t, v in _expand(cat, X, U, tx, tu, c).items():
            M[idx[t], j] += v
    cache[key] = (M, ranges)
    return cache[key]


class Morphism:
    """A morphism ``dom -> cod`` stored as charge blocks."""

    __slots__ = ("cat", "dom", "cod", "blocks")
    __array_priority__ = 100

    def __init__(self, cat, dom: Obj, cod: Obj, blocks: dict[int, np.ndarray] | None = None):
        self.cat = cat
        self.dom = tuple(dom)
        self.cod = tuple(cod)
        td, tc = trees(cat, self.dom), trees(cat, self.cod)
        full = {}
        for c in td:
            if c in tc:
                shape = (len(tc[c]), len(td[c]))
                if blocks is not None and c in blocks:
                    blk = np.asarray(blocks[c], dtype=complex)
                    if blk.shape != shape:
                        raise ValueError(f"block {c} has shape {blk.shape}, expected {shape}")
                    full[c] = blk
                else:
                    full[c] = np.zeros(shape, dtype=complex)
        self.blocks = full

    # -- algebra -----------------------------------------------------------
    def __matmul__(self, other: "Morphism") -> "Morphism":
        if other.cod != self.dom:
            raise ValueError(f"cannot compose {other.cod} into {self.dom}")
        res = Morphism(self.cat, other.dom, self.cod)
        for c in res.blocks:
            if c in self.blocks and c in other.blocks:
                res.blocks[c] = self.blocks[c] @ other.blocks[c]
        return res

    def _binop(self, other: "Morphism", op) -> "Morphism":
        if (self.dom, self.cod) != (other.dom, other.cod):
            raise ValueError("shape mismatch")
        return Morphism(self.cat, self.dom, self.cod,
                        {c: op(b, other.blocks[c]) for c, b in self.blocks.items()})

    def __add__(self, other):
        return self._binop(other, np.add)

    def __sub__(self, other):
        return self._binop(other, np.subtract)

    def __mul__(self, z):
        return Morphism(self.cat, self.dom, self.cod, {c: z * b for c, b in self.blocks.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    @property
    def H(self) -> "Morphism":
        return Morphism(self.cat, self.cod, self.dom, {c: b.conj().T for c, b in self.blocks.items()})

    def tensor(self, other: "Morphism") -> "Morphism":
        cat = self.cat
        dom, cod = self.dom + other.dom, self.cod + other.cod
        res = Morphism(cat, dom, cod)
        for c in res.blocks:
            Md, rd = product_matrix(cat, self.dom, other.dom, c)
            Mc, rc = product_matrix(cat, self.cod, other.cod, c)
            K = np.zeros((Mc.shape[1], Md.shape[1]), dtype=complex)
            for ab, (r0, r1) in rc.items():
                if ab not in rd:
                    continue
                a, b = ab
                if a not in self.blocks or b not in other.blocks:
                    continue
                c0, c1 = rd[ab]
                K[r0:r1, c0:c1] = np.kron(self.blocks[a], other.blocks[b])
            res.blocks[c] = Mc @ K @ Md.conj().T
        return res

    def __xor__(self, other):
        return self.tensor(other)

    # -- scalars -----------------------------------------------------------
    def trace(self) -> complex:
        """Categorical trace ``sum_c d_c Tr(block_c)``."""
        if self.dom != self.cod:
            raise ValueError("trace of a non-endomorphism")
        d = self.cat.ring.dims
        return complex(sum(d[c] * np.trace(b) for c, b in self.blocks.items()))

    def norm(self) -> float:
        return max((float(np.abs(b).max()) for b in self.blocks.values() if b.size), default=0.0)

    def vector(self) -> np.ndarray:
        parts = [b.ravel() for _, b in sorted(self.blocks.items())]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=complex)

    @classmethod
    def from_vector(cls, cat, dom: Obj, cod: Obj, v) -> "Morphism":
        m = cls(cat, dom, cod)
        pos = 0
        for c in sorted(m.blocks):
            n = m.blocks[c].size
            m.blocks[c] = np.asarray(v[pos:pos + n], dtype=complex).reshape(m.blocks[c].shape)
            pos += n
        return m

    def size(self) -> int:
        return sum(b.size for b in self.blocks.values())

    def __repr__(self):
        return f"Morphism({self.dom} -> {self.cod}, charges={sorted(self.blocks)})"


def hom_dim(cat, X: Obj, Y: Obj) -> int:
    return Morphism(cat, X, Y).size()


def hom_basis(cat, X: Obj, Y: Obj) -> list[Morphism]:
    """Elementary (tree-pair) basis; orthonormal for the trace-free coefficient inner product."""
    n = hom_dim(cat, X, Y)
    eye = np.eye(n)
    return [Morphism.from_vector(cat, X, Y, eye[i]) for i in range(n)]


def identity(cat, X: Obj) -> Morphism:
    return Morphism(cat, X, X, {c: np.eye(len(t)) for c, t in trees(cat, X).items()})


def vertex(cat, a: int, b: int, c: int) -> Morphism:
    """The basis isometry ``T_{ab}^c in Hom(c, a b)``."""
    if not cat.ring.admissible(a, b, c):
        raise ValueError(f"inadmissible vertex {(a, b, c)}")
    return Morphism(cat, obj(c), obj(a, b), {c: np.ones((1, 1))})


def inclusion(cat, strand: Strand, i: int) -> Morphism:
    """Isometric inclusion of summand ``i`` into ``strand``."""
    lab = strand[i]
    X = (strand,)
    blk = np.zeros((len(trees(cat, X)[lab]), 1))
    blk[tree_index(cat, X)[lab][((i,), (lab,))], 0] = 1
    return Morphism(cat, obj(lab), X, {lab: blk})


def _braid_strands(cat, x: Strand, y: Strand) -> Morphism:
    X, Y = (x, y), (y, x)
    m = Morphism(cat, X, Y)
    ti = tree_index(cat, Y)
    for c, tl in trees(cat, X).items():
        blk = m.blocks[c]
        for j, ((i1, i2), _) in enumerate(tl):
            a, b = x[i1], y[i2]
            blk[ti[c][((i2, i1), (b, c))], j] = cat.rsym(a, b, c)
    return m


def braid(cat, X: Obj, Y: Obj) -> Morphism:
    """``c_{X,Y}: X Y -> Y X``."""
    if not X or not Y:
        return identity(cat, X + Y)
    if len(X) == 1 and len(Y) == 1:
        key = (X[0], Y[0])
        memo = _cache(cat, "braid")
        if key not in memo:
            memo[key] = _braid_strands(cat, X[0], Y[0])
        return memo[key]
    if len(X) == 1:
        # c_{x, Y1 Y2} = (1_Y1 c_{x,Y2}) (c_{x,Y1} 1_Y2)
        Y1, Y2 = Y[:1], Y[1:]
        first = braid(cat, X, Y1).tensor(identity(cat, Y2))
        second = identity(cat, Y1).tensor(braid(cat, X, Y2))
        return second @ first
    # c_{X1 X2, Y} = (c_{X1,Y} 1_X2) (1_X1 c_{X2,Y})
    X1, X2 = X[:1], X[1:]
    first = identity(cat, X1).tensor(braid(cat, X2, Y))
    second = braid(cat, X1, Y).tensor(identity(cat, X2))
    return second @ first


def braid_inv(cat, X: Obj, Y: Obj) -> Morphism:
    """``c_{Y,X}^{-1}: X Y -> Y X`` (the reverse braiding)."""
    return braid(cat, Y, X).H


def tensor_all(ms: Iterable[Morphism]) -> Morphism:
    ms = list(ms)
    out = ms[0]
    for m in ms[1:]:
        out = out.tensor(m)
    return out
