"""Normality of a coupling matrix through two equivalent criteria.

N2: row 0 and column 0 of Z are unit vectors.
N3: Z is the permutation matrix of a fusion-preserving bijection.
The verdict is "normal" in the coupling-matrix sense only; the relative
commutant formulation has no finite presentation here.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fusion_ring import FusionRing, StructuralError


class InconsistentVerdict(AssertionError):
    """N2 and N3 disagree, which the equivalence forbids."""


@dataclass
class N3Result:
    sigma: tuple[int, ...] | None
    reason: str = ""
    violation: tuple | None = None


@dataclass
class NormalityVerdict:
    n2_holds: bool
    n3_witness: tuple[int, ...] | None
    verdict: str
    offending: list = field(default_factory=list)
    n3_reason: str = ""

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "n2_holds": self.n2_holds,
                "n3_witness": None if self.n3_witness is None else list(self.n3_witness),
                "n3_reason": self.n3_reason,
                "offending": [{"row": i, "col": j, "value": v} for i, j, v in self.offending]}


def _as_int_matrix(Z) -> np.ndarray:
    Z = np.asarray(Z)
    if Z.ndim != 2:
        raise StructuralError("coupling matrix must be 2-dimensional")
    Zi = np.rint(Z).astype(np.int64)
    if np.any(np.abs(Z - Zi) > 0) or np.any(Zi < 0):
        raise StructuralError("coupling matrix must have nonnegative integer entries")
    return Zi


def check_n2(Z) -> tuple[bool, list[tuple[int, int, int]]]:
    """True iff Z couples no nontrivial sector to the unit; else the offending entries."""
    Z = _as_int_matrix(Z)
    if Z[0, 0] != 1:
        raise StructuralError(f"Z[0,0] = {Z[0, 0]}, expected 1")
    bad = [(0, j, int(Z[0, j])) for j in range(1, Z.shape[1]) if Z[0, j]]
    bad += [(i, 0, int(Z[i, 0])) for i in range(1, Z.shape[0]) if Z[i, 0]]
    return not bad, bad


def find_n3(Z, ring1: FusionRing, ring2: FusionRing) -> N3Result:
    Z = _as_int_matrix(Z)
    if Z.shape != (ring1.rank, ring2.rank):
        raise StructuralError(f"Z has shape {Z.shape}, rings have ranks {(ring1.rank, ring2.rank)}")
    if Z.shape[0] != Z.shape[1]:
        return N3Result(None, "not square")
    rows_ok = np.all(Z.sum(axis=1) == 1) and np.all(Z.sum(axis=0) == 1) and np.all(Z <= 1)
    if not rows_ok:
        i, j = np.argwhere((Z > 1) | (Z.sum(axis=1, keepdims=True) != 1) | (Z.sum(axis=0, keepdims=True) != 1))[0]
        return N3Result(None, "not a permutation matrix", (int(i), int(j), int(Z[i, j])))
    sigma = tuple(int(np.flatnonzero(Z[a])[0]) for a in range(Z.shape[0]))
    n = len(sigma)
    s = np.array(sigma)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if ring1.N[a, b, c] != ring2.N[s[a], s[b], s[c]]:
                    return N3Result(None, "fusion not preserved", (a, b, c))
    return N3Result(sigma)


def classify(Z, ring1: FusionRing, ring2: FusionRing) -> NormalityVerdict:
    n2, bad = check_n2(Z)
    n3 = find_n3(Z, ring1, ring2)
    if n2 != (n3.sigma is not None):
        raise InconsistentVerdict(
            f"N2 says {n2} but N3 {'found' if n3.sigma else 'found no'} bijection ({n3.reason})")
    return NormalityVerdict(n2, n3.sigma, "normal" if n2 else "not_normal", bad, n3.reason)
