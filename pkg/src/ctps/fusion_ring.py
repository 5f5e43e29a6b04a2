"""Finite closed systems of sectors at the level of fusion rings."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

RING_TOL = 1e-9


class StructuralError(ValueError):
    """Malformed input (shapes, ranges), as opposed to a failed invariant."""


class ModularDataError(ValueError):
    pass


@dataclass(frozen=True)
class Label:
    id: int
    name: str


@dataclass(frozen=True, eq=False)
class FusionRing:
    """Labels, fusion tensor ``N[a, b, c] = N^c_{ab}``, duals, dimensions.

    ``S`` is a square matrix and ``T`` the diagonal of the T-matrix; both
    optional.
    """

    names: tuple[str, ...]
    N: np.ndarray
    dual: tuple[int, ...]
    dims: np.ndarray
    S: np.ndarray | None = None
    T: np.ndarray | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.names)
        N = np.asarray(self.N)
        if N.shape != (n, n, n):
            raise StructuralError(f"fusion tensor has shape {N.shape}, expected {(n, n, n)}")
        if len(self.dual) != n:
            raise StructuralError("dual map has wrong length")
        if any(not 0 <= d < n for d in self.dual):
            raise StructuralError("dual map out of range")
        if np.shape(self.dims) != (n,):
            raise StructuralError("dims has wrong length")
        if self.S is not None and np.shape(self.S) != (n, n):
            raise StructuralError("S has wrong shape")
        if self.T is not None and np.shape(self.T) != (n,):
            raise StructuralError("T must be the length-n diagonal")
        if np.any(N < 0):
            raise StructuralError("negative fusion multiplicity")
        object.__setattr__(self, "N", N.astype(np.int64))
        object.__setattr__(self, "dims", np.asarray(self.dims, dtype=float))

    @classmethod
    def from_rules(cls, names, N, dual, dims=None, S=None, T=None) -> "FusionRing":
        N = np.asarray(N)
        if dims is None:
            dims = pf_dimensions(N)
        return cls(tuple(names), N, tuple(int(x) for x in dual), np.asarray(dims, float),
                   None if S is None else np.asarray(S, complex),
                   None if T is None else np.asarray(T, complex))

    @property
    def rank(self) -> int:
        return len(self.names)

    @property
    def labels(self) -> list[Label]:
        return [Label(i, s) for i, s in enumerate(self.names)]

    @cached_property
    def channels(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        """``channels[a][b]``: the labels c with ``N^c_{ab} > 0``."""
        n = self.rank
        return tuple(tuple(tuple(int(c) for c in np.nonzero(self.N[a, b])[0]) for b in range(n))
                     for a in range(n))

    def admissible(self, a: int, b: int, c: int) -> bool:
        return self.N[a, b, c] > 0

    @property
    def multiplicity_free(self) -> bool:
        return bool(np.all(self.N <= 1))

    @property
    def global_dim(self) -> float:
        return float(np.sum(self.dims ** 2))

    def fusion_matrix(self, a: int) -> np.ndarray:
        """``(N_a)[c, b] = N^c_{ab}``."""
        return self.N[a].T.copy()


@dataclass
class Check:
    name: str
    passed: bool
    worst: float = 0.0
    skipped: bool = False

    def line(self) -> str:
        status = "skipped" if self.skipped else ("pass" if self.passed else "FAIL")
        return f"{self.name}: {status} (worst {self.worst:.3e})"


@dataclass
class ValidationReport:
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed or c.skipped for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "skipped": c.skipped, "worst": c.worst}
                for c in self.checks
            ],
        }


def validate_ring(ring: FusionRing, tol: float = RING_TOL) -> ValidationReport:
    N = ring.N
    n = ring.rank
    delta = np.eye(n, dtype=np.int64)
    checks = []

    unit = max(np.abs(N[:, 0, :] - delta).max(), np.abs(N[0, :, :] - delta).max())
    checks.append(Check("unit", unit == 0, float(unit)))

    # (ab)c = a(bc): sum_s N^s_ab N^v_sc = sum_s N^s_bc N^v_as
    lhs = np.einsum("abs,scv->abcv", N, N)
    rhs = np.einsum("bcs,asv->abcv", N, N)
    assoc = np.abs(lhs - rhs).max() if n else 0
    checks.append(Check("associativity", assoc == 0, float(assoc)))

    dual = np.array(ring.dual)
    invol = int(np.any(dual[dual] != np.arange(n)))
    conj_unit = np.abs(N[:, :, 0] - delta[dual]).max()
    checks.append(Check("conjugates", invol == 0 and conj_unit == 0, float(max(invol, conj_unit))))

    # N^c_ab = N^b_{a' c} = N^a_{c b'}
    fr1 = np.abs(N - N[dual].transpose(0, 2, 1)).max()
    fr2 = np.abs(N - N[:, dual, :].transpose(2, 1, 0)).max()
    fr = max(fr1, fr2)
    checks.append(Check("frobenius_reciprocity", fr == 0, float(fr)))

    d = ring.dims
    dim_eq = np.abs(np.outer(d, d) - N @ d).max()
    dim_ok = dim_eq < tol and np.all(d >= 1 - tol) and np.abs(d - d[dual]).max() < tol
    checks.append(Check("dimensions", bool(dim_ok), float(max(dim_eq, np.abs(d - d[dual]).max()))))

    if ring.S is None:
        checks.append(Check("modular", True, skipped=True))
        checks.append(Check("verlinde", True, skipped=True))
    else:
        S = ring.S
        unit_res = np.abs(S @ S.conj().T - np.eye(n)).max()
        sym_res = np.abs(S - S.T).max()
        checks.append(Check("modular", bool(max(unit_res, sym_res) < tol), float(max(unit_res, sym_res))))
        try:
            Nv, res = verlinde_fusion(S)
            worst = float(max(res, np.abs(Nv - N).max()))
            checks.append(Check("verlinde", bool(np.array_equal(Nv, N)), worst))
        except ModularDataError:
            checks.append(Check("verlinde", False, float("inf")))
    return ValidationReport(checks)


def pf_dimensions(N) -> np.ndarray:
    """Perron-Frobenius dimensions: spectral radius of each fusion matrix."""
    N = np.asarray(N, dtype=float)
    n = N.shape[0]
    if N.shape != (n, n, n):
        raise StructuralError("fusion tensor must be n x n x n")
    d = np.array([np.abs(np.linalg.eigvals(N[a].T)).max() for a in range(n)])
    if np.any(d < 1 - RING_TOL) or np.abs(np.outer(d, d) - N @ d).max() > 1e-8:
        raise StructuralError("fusion tensor admits no consistent positive dimension function")
    return d


def verlinde_fusion(S, tol: float = 1e-6) -> tuple[np.ndarray, float]:
    """Fusion tensor from the Verlinde formula and the worst rounding residual."""
    S = np.asarray(S, dtype=complex)
    n = S.shape[0]
    if S.shape != (n, n):
        raise ModularDataError("S must be square")
    if np.abs(S @ S.conj().T - np.eye(n)).max() > tol:
        raise ModularDataError("S is not unitary")
    if np.abs(S - S.T).max() > tol:
        raise ModularDataError("S is not symmetric")
    s0 = S[0]
    if np.abs(s0.imag).max() > tol or np.any(s0.real <= 0):
        raise ModularDataError("first row of S must be strictly positive")
    raw = np.einsum("as,bs,cs->abc", S, S, S.conj() / s0.real)
    Nr = np.rint(raw.real).astype(np.int64)
    res = float(max(np.abs(raw - Nr).max(), 0.0))
    if res > tol or np.any(Nr < 0):
        raise ModularDataError(f"Verlinde numbers are not integral (residual {res:.2e})")
    return Nr, res


def conjugation_matrix(ring: FusionRing) -> np.ndarray:
    n = ring.rank
    C = np.zeros((n, n), dtype=np.int64)
    C[np.arange(n), list(ring.dual)] = 1
    return C
