"""Built-in example categories: SU(2)_k, pointed Z_n, Ising, Fibonacci."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fusion_ring import FusionRing, StructuralError
from .skeletal import SkeletalData, f_tuples, modular_from_braiding

MAX_LEVEL = 12


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    level: int | None = None
    n: int | None = None
    p: int | None = None

    def build(self) -> SkeletalData:
        if self.kind == "su2_level_k":
            return gen_su2k(self.level)
        if self.kind == "pointed_cyclic":
            return gen_pointed(self.n, self.p)
        if self.kind in ("ising", "fibonacci"):
            return builtin(self.kind)
        raise ValueError(f"unknown model kind {self.kind!r}")


# -- SU(2)_k -------------------------------------------------------------------

def su2k_fusion(k: int) -> np.ndarray:
    """Truncated Clebsch-Gordan rule on doubled spins 0..k."""
    n = k + 1
    N = np.zeros((n, n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            for c in range(abs(a - b), min(a + b, 2 * k - a - b) + 1, 2):
                N[a, b, c] = 1
    return N


class _QNumbers:
    def __init__(self, k: int):
        self.k = k
        x = math.pi / (k + 2)
        self.q = [math.sin(m * x) / math.sin(x) for m in range(2 * k + 6)]
        fact = [1.0]
        for m in range(1, 2 * k + 6):
            fact.append(fact[-1] * self.q[m])
        self.fact = fact

    def delta(self, a, b, c):
        """Triangle coefficient on doubled spins."""
        f = self.fact
        return math.sqrt(f[(a + b - c) // 2] * f[(a - b + c) // 2] * f[(-a + b + c) // 2]
                         / f[(a + b + c) // 2 + 1])

    def sixj(self, j1, j2, j3, j4, j5, j6):
        """Quantum 6j symbol {j1 j2 j3; j4 j5 j6} (doubled spins, Racah form)."""
        f = self.fact
        t1 = (j1 + j2 + j3) // 2
        t2 = (j1 + j5 + j6) // 2
        t3 = (j4 + j2 + j6) // 2
        t4 = (j4 + j5 + j3) // 2
        p1 = (j1 + j2 + j4 + j5) // 2
        p2 = (j2 + j3 + j5 + j6) // 2
        p3 = (j3 + j1 + j6 + j4) // 2
        total = 0.0
        for z in range(max(t1, t2, t3, t4), min(p1, p2, p3) + 1):
            total += (-1) ** z * f[z + 1] / (f[z - t1] * f[z - t2] * f[z - t3] * f[z - t4]
                                            * f[p1 - z] * f[p2 - z] * f[p3 - z])
        return (self.delta(j1, j2, j3) * self.delta(j1, j5, j6) * self.delta(j4, j2, j6)
                * self.delta(j4, j5, j3) * total)


def su2k_modular(k: int) -> tuple[np.ndarray, np.ndarray]:
    n = k + 1
    a = np.arange(n)
    S = math.sqrt(2 / (k + 2)) * np.sin(np.outer(a + 1, a + 1) * math.pi / (k + 2))
    h = a * (a + 2) / (4 * (k + 2))
    c = 3 * k / (k + 2)
    T = np.exp(2j * math.pi * (h - c / 24))
    return S.astype(complex), T


def gen_su2k(k: int) -> SkeletalData:
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= MAX_LEVEL:
        raise ValueError(f"level must be an integer in [1, {MAX_LEVEL}], got {k!r}")
    k = int(k)
    N = su2k_fusion(k)
    n = k + 1
    dims = np.array([math.sin((a + 1) * math.pi / (k + 2)) / math.sin(math.pi / (k + 2)) for a in range(n)])
    S, T = su2k_modular(k)
    ring = FusionRing(tuple(str(a) for a in range(n)), N, tuple(range(n)), dims, S, T)
    qn = _QNumbers(k)
    F = {}
    for a, b, c, d, e, f in f_tuples(ring):
        sign = -1 if ((a + b + c + d) // 2) % 2 else 1
        F[(a, b, c, d, e, f)] = sign * math.sqrt(qn.q[e + 1] * qn.q[f + 1]) * qn.sixj(a, b, e, c, d, f)
    q = np.exp(1j * math.pi / (k + 2))
    R = {}
    for a in range(n):
        for b in range(n):
            for c in ring.channels[a][b]:
                sign = -1 if ((a + b - c) // 2) % 2 else 1
                R[(a, b, c)] = sign * q ** ((c * (c + 2) - a * (a + 2) - b * (b + 2)) / 4)
    return SkeletalData(ring, F, R)


# -- pointed Z_n -----------------------------------------------------------------

def gen_pointed(n: int, p: int) -> SkeletalData:
    """Z_n with quadratic form q(a) = exp(i pi p a^2 / n); needs p*n even."""
    if n < 1:
        raise ValueError("group order must be >= 1")
    if (p * n) % 2:
        raise ValueError(f"q(a) = exp(i pi {p} a^2/{n}) is not well defined on Z_{n} (p*n odd)")
    N = np.zeros((n, n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            N[a, b, (a + b) % n] = 1
    ring = FusionRing(tuple(str(a) for a in range(n)), N, tuple((-a) % n for a in range(n)), np.ones(n))
    F, R = {}, {}
    for a in range(n):
        for b in range(n):
            for c in range(n):
                carry = (b + c - (b + c) % n)
                F[(a, b, c, (a + b + c) % n, (a + b) % n, (b + c) % n)] = np.exp(1j * math.pi * p * a * carry / n)
            R[(a, b, (a + b) % n)] = np.exp(1j * math.pi * p * a * b / n)
    data = SkeletalData(ring, F, R)
    return _attach_modular(data)


# -- Ising and Fibonacci -------------------------------------------------------------

def _attach_modular(data: SkeletalData) -> SkeletalData:
    S, T, _ = modular_from_braiding(data)
    r = data.ring
    ring = FusionRing(r.names, r.N, r.dual, r.dims, S, T)
    return SkeletalData(ring, data.F, data.R)


def _ising() -> SkeletalData:
    one, sig, psi = 0, 1, 2
    N = np.zeros((3, 3, 3), dtype=np.int64)
    rules = {(0, 0): [0], (0, 1): [1], (0, 2): [2], (1, 1): [0, 2], (1, 2): [1], (2, 2): [0]}
    for (a, b), cs in rules.items():
        for c in cs:
            N[a, b, c] = N[b, a, c] = 1
    ring = FusionRing(("1", "sigma", "psi"), N, (0, 1, 2), np.array([1.0, math.sqrt(2), 1.0]))
    F = {t: 1.0 for t in f_tuples(ring)}
    s = 1 / math.sqrt(2)
    for e in (0, 2):
        for f in (0, 2):
            F[(sig, sig, sig, sig, e, f)] = -s if (e == 2 and f == 2) else s
    F[(sig, psi, sig, psi, sig, sig)] = -1.0
    F[(psi, sig, psi, sig, sig, sig)] = -1.0
    R = {}
    for a in range(3):
        for b in range(3):
            for c in ring.channels[a][b]:
                R[(a, b, c)] = 1.0
    R[(sig, sig, one)] = np.exp(-1j * math.pi / 8)
    R[(sig, sig, psi)] = np.exp(3j * math.pi / 8)
    R[(sig, psi, sig)] = R[(psi, sig, sig)] = -1j
    R[(psi, psi, one)] = -1.0
    return _attach_modular(SkeletalData(ring, F, R))


def _fibonacci() -> SkeletalData:
    phi = (1 + math.sqrt(5)) / 2
    N = np.zeros((2, 2, 2), dtype=np.int64)
    N[0, 0, 0] = N[0, 1, 1] = N[1, 0, 1] = N[1, 1, 0] = N[1, 1, 1] = 1
    ring = FusionRing(("1", "tau"), N, (0, 1), np.array([1.0, phi]))
    F = {t: 1.0 for t in f_tuples(ring)}
    F[(1, 1, 1, 1, 0, 0)] = 1 / phi
    F[(1, 1, 1, 1, 0, 1)] = F[(1, 1, 1, 1, 1, 0)] = 1 / math.sqrt(phi)
    F[(1, 1, 1, 1, 1, 1)] = -1 / phi
    R = {(0, 0, 0): 1.0, (0, 1, 1): 1.0, (1, 0, 1): 1.0,
         (1, 1, 0): np.exp(-4j * math.pi / 5), (1, 1, 1): np.exp(3j * math.pi / 5)}
    return _attach_modular(SkeletalData(ring, F, R))


def builtin(name: str) -> SkeletalData:
    key = {"fib": "fibonacci", "fibonacci": "fibonacci", "ising": "ising", "semion": "semion"}.get(name)
    if key == "fibonacci":
        return _fibonacci()
    if key == "ising":
        return _ising()
    if key == "semion":
        return gen_pointed(2, 1)
    raise ValueError(f"unknown built-in model {name!r}")


def as_skeletal(model) -> SkeletalData:
    if isinstance(model, SkeletalData):
        return model
    if isinstance(model, ModelSpec):
        return model.build()
    raise StructuralError(f"cannot interpret {model!r} as a model")
