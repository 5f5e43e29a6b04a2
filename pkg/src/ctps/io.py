"""JSON file formats for models, Q-systems, zeta arrays and Z matrices.

Model file::

    {"format": "ctps-model", "version": 1,
     "labels": ["1", "tau"],
     "fusion": [[a, b, [c, ...]], ...],        # repeat c for multiplicity
     "dual": [0, 1],
     "S": [[[re, im], ...], ...],               # optional
     "T": [[re, im], ...],                      # optional, the diagonal
     "F": [[a, b, c, d, e, f, [re, im]], ...],  # optional
     "R": [[a, b, c, [re, im]], ...]}           # optional

Q-system file::

    {"format": "ctps-qsystem", "version": 1, "system": "single" | "product",
     "theta": [[label, multiplicity], ...],     # label is [a1, a2] for "product"
     "mult": [[l, m, n, [re, im]], ...]}

Summands are the theta entries expanded in file order.  A product system is
``C x Cbar`` over the model given alongside.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .fusion_ring import FusionRing, StructuralError, pf_dimensions
from .qsystem import QSystem
from .skeletal import ProductData, SkeletalData

MODEL_KEYS = {"format", "version", "labels", "fusion", "dual", "dims", "S", "T", "F", "R"}
QSYSTEM_KEYS = {"format", "version", "system", "theta", "mult"}
ZETA_KEYS = {"format", "version", "signs", "Z", "dtheta", "summands", "zeta"}


class ParseError(ValueError):
    def __init__(self, source: str, location: str, message: str):
        self.source, self.location = source, location
        super().__init__(f"{source}: {location}: {message}")


# -- primitives --------------------------------------------------------------------

def num(x: float) -> float | int:
    """JSON-stable float: shortest round-trip repr, no negative zero."""
    x = float(x)
    if x == 0:
        return 0.0
    return x


def cnum(z) -> list:
    z = complex(z)
    return [num(z.real), num(z.imag)]


def dumps(obj) -> str:
    return json.dumps(obj, indent=1, ensure_ascii=True, allow_nan=False) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj))


def _load(path) -> tuple[dict, str]:
    src = str(path)
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ParseError(src, "file", str(e)) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(src, f"line {e.lineno} column {e.colno}", e.msg) from None
    if not isinstance(doc, dict):
        raise ParseError(src, "top level", "expected an object")
    return doc, src


def _complex(v, src, loc) -> complex:
    if (not isinstance(v, list) or len(v) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)):
        raise ParseError(src, loc, "complex numbers are written as [re, im]")
    return complex(v[0], v[1])


def _int(v, src, loc, lo=0, hi=None) -> int:
    if not isinstance(v, int) or isinstance(v, bool) or v < lo or (hi is not None and v >= hi):
        raise ParseError(src, loc, f"expected an integer in [{lo}, {hi})" if hi else "expected a nonnegative integer")
    return v


def _check_keys(doc, allowed, src, fmt):
    extra = sorted(set(doc) - allowed)
    if extra:
        raise ParseError(src, extra[0], "unknown field")
    if doc.get("format", fmt) != fmt:
        raise ParseError(src, "format", f"expected {fmt!r}")


# -- models ---------------------------------------------------------------------

def model_to_dict(data: SkeletalData) -> dict:
    ring = data.ring
    n = ring.rank
    fusion = [[a, b, [int(c) for c in range(n) for _ in range(int(ring.N[a, b, c]))]]
              for a in range(n) for b in range(n) if ring.N[a, b].any()]
    out = {"format": "ctps-model", "version": 1, "labels": list(ring.names), "fusion": fusion,
           "dual": list(ring.dual), "dims": [num(x) for x in ring.dims]}
    if ring.S is not None:
        out["S"] = [[cnum(z) for z in row] for row in ring.S]
    if ring.T is not None:
        out["T"] = [cnum(z) for z in ring.T]
    out["F"] = [list(k) + [cnum(v)] for k, v in sorted(data.F.items())]
    if data.R is not None:
        out["R"] = [list(k) + [cnum(v)] for k, v in sorted(data.R.items())]
    return out


def write_model(path, data: SkeletalData) -> None:
    write_json(path, model_to_dict(data))


def read_model(path) -> SkeletalData | FusionRing:
    """SkeletalData if F is present, else the bare FusionRing."""
    doc, src = _load(path)
    _check_keys(doc, MODEL_KEYS, src, "ctps-model")
    for key in ("labels", "fusion", "dual"):
        if key not in doc:
            raise ParseError(src, key, "missing required field")
    labels = doc["labels"]
    if not isinstance(labels, list) or not labels or not all(isinstance(s, str) for s in labels):
        raise ParseError(src, "labels", "expected a nonempty list of strings")
    n = len(labels)
    N = np.zeros((n, n, n), dtype=np.int64)
    if not isinstance(doc["fusion"], list):
        raise ParseError(src, "fusion", "expected a list")
    for i, entry in enumerate(doc["fusion"]):
        loc = f"fusion[{i}]"
        if not isinstance(entry, list) or len(entry) != 3 or not isinstance(entry[2], list):
            raise ParseError(src, loc, "expected [a, b, [c, ...]]")
        a, b = _int(entry[0], src, loc, 0, n), _int(entry[1], src, loc, 0, n)
        for c in entry[2]:
            N[a, b, _int(c, src, loc, 0, n)] += 1
    dual = doc["dual"]
    if not isinstance(dual, list) or len(dual) != n:
        raise ParseError(src, "dual", f"expected {n} entries")
    dual = [_int(x, src, f"dual[{i}]", 0, n) for i, x in enumerate(dual)]
    for a in range(n):
        unit_row = [int(N[0, a, c]) for c in range(n)]
        if unit_row != [int(c == a) for c in range(n)] or [int(N[a, 0, c]) for c in range(n)] != unit_row:
            raise ParseError(src, "fusion", f"label 0 is not the unit (fails on label {a})")
    if "dims" in doc:
        if not isinstance(doc["dims"], list) or len(doc["dims"]) != n:
            raise ParseError(src, "dims", f"expected {n} numbers")
        dims = np.array(doc["dims"], dtype=float)
    else:
        try:
            dims = pf_dimensions(N)
        except StructuralError as e:
            raise ParseError(src, "fusion", str(e)) from None
    S = T = None
    if "S" in doc:
        rows = doc["S"]
        if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
            raise ParseError(src, "S", f"expected a {n}x{n} matrix")
        S = np.array([[_complex(v, src, f"S[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(rows)])
    if "T" in doc:
        if not isinstance(doc["T"], list) or len(doc["T"]) != n:
            raise ParseError(src, "T", f"expected {n} diagonal entries")
        T = np.array([_complex(v, src, f"T[{i}]") for i, v in enumerate(doc["T"])])
    try:
        ring = FusionRing(tuple(labels), N, tuple(dual), dims, S, T)
    except StructuralError as e:
        raise ParseError(src, "model", str(e)) from None
    if "F" not in doc:
        if "R" in doc:
            raise ParseError(src, "R", "R-symbols require F-symbols")
        return ring
    F = {}
    for i, entry in enumerate(doc["F"]):
        loc = f"F[{i}]"
        if not isinstance(entry, list) or len(entry) != 7:
            raise ParseError(src, loc, "expected [a, b, c, d, e, f, [re, im]]")
        key = tuple(_int(x, src, loc, 0, n) for x in entry[:6])
        F[key] = _complex(entry[6], src, loc)
    R = None
    if "R" in doc:
        R = {}
        for i, entry in enumerate(doc["R"]):
            loc = f"R[{i}]"
            if not isinstance(entry, list) or len(entry) != 4:
                raise ParseError(src, loc, "expected [a, b, c, [re, im]]")
            key = tuple(_int(x, src, loc, 0, n) for x in entry[:3])
            R[key] = _complex(entry[3], src, loc)
    try:
        return SkeletalData(ring, F, R)
    except StructuralError as e:
        raise ParseError(src, "model", str(e)) from None


# -- Q-systems -----------------------------------------------------------------------

def qsystem_to_dict(Q: QSystem) -> dict:
    data = Q.data
    product = isinstance(data, ProductData)
    theta, i = [], 0
    L = Q.summands
    while i < len(L):
        j = i
        while j < len(L) and L[j] == L[i]:
            j += 1
        lab = list(data.split(L[i])) if product else L[i]
        theta.append([lab, j - i])
        i = j
    mult = [[l, m, n, cnum(v)] for (l, m, n), v in sorted(Q.mult.items())]
    return {"format": "ctps-qsystem", "version": 1, "system": "product" if product else "single",
            "theta": theta, "mult": mult}


def write_qsystem(path, Q: QSystem) -> None:
    write_json(path, qsystem_to_dict(Q))


def read_qsystem(path, model: SkeletalData) -> QSystem:
    doc, src = _load(path)
    _check_keys(doc, QSYSTEM_KEYS, src, "ctps-qsystem")
    system = doc.get("system", "single")
    if system not in ("single", "product"):
        raise ParseError(src, "system", "expected 'single' or 'product'")
    data = ProductData(model, model, conjugate=True) if system == "product" else model
    n = model.ring.rank
    if "theta" not in doc:
        raise ParseError(src, "theta", "missing required field")
    summands = []
    for i, entry in enumerate(doc["theta"]):
        loc = f"theta[{i}]"
        if not isinstance(entry, list) or len(entry) != 2:
            raise ParseError(src, loc, "expected [label, multiplicity]")
        lab, k = entry
        if system == "product":
            if not isinstance(lab, list) or len(lab) != 2:
                raise ParseError(src, loc, "product labels are [a1, a2]")
            lab = _int(lab[0], src, loc, 0, n) * n + _int(lab[1], src, loc, 0, n)
        else:
            lab = _int(lab, src, loc, 0, n)
        summands += [lab] * _int(k, src, loc, 1)
    mult = {}
    for i, entry in enumerate(doc.get("mult", [])):
        loc = f"mult[{i}]"
        if not isinstance(entry, list) or len(entry) != 4:
            raise ParseError(src, loc, "expected [l, m, n, [re, im]]")
        key = tuple(_int(x, src, loc, 0, len(summands)) for x in entry[:3])
        mult[key] = mult.get(key, 0) + _complex(entry[3], src, loc)
    try:
        return QSystem(data, tuple(summands), mult)
    except StructuralError as e:
        raise ParseError(src, "qsystem", str(e)) from None


# -- zeta and Z ------------------------------------------------------------------------

def zeta_to_dict(zs) -> dict:
    return {"format": "ctps-zeta", "version": 1, "signs": "".join(zs.signs),
            "Z": zs.Z.astype(int).tolist(), "dtheta": num(zs.dtheta),
            "summands": [list(s) for s in zs.summands],
            "zeta": [[l, m, n, cnum(v)] for (l, m, n), v in sorted(zs.zeta.items())]}


def read_matrix(path) -> np.ndarray:
    """An integer matrix from a file holding {"Z": [[...]]} (e.g. an induction report)."""
    doc, src = _load(path)
    Z = doc.get("Z")
    if Z is None and isinstance(doc.get("induction"), dict):
        Z = doc["induction"].get("Z")
        if Z is None:
            raise ParseError(src, "induction.Z", "missing")
    if Z is None:
        raise ParseError(src, "Z", "missing required field")
    if not isinstance(Z, list) or not Z or any(not isinstance(r, list) or len(r) != len(Z[0]) for r in Z):
        raise ParseError(src, "Z", "expected a rectangular matrix")
    for i, r in enumerate(Z):
        for j, v in enumerate(r):
            _int(v, src, f"Z[{i}][{j}]")
    return np.array(Z, dtype=np.int64)
