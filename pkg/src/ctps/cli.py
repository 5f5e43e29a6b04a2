"""Command-line entry point: ``ctps <subcommand> ...``.

Exit codes: 0 all checks pass, 1 a check failed, 2 parse error, 3 certification failure.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io
from .fusion_ring import FusionRing, StructuralError, validate_ring
from .induction import (Induction, UncertifiedDimension, check_dimension_preservation,
                        check_extension_axioms, coupling_matrix, parse_signs)
from .model_gen import builtin, gen_pointed, gen_su2k
from .normality import InconsistentVerdict, classify
from .qsystem import NoSolution, QSystem, solve_qsystem, verify_qsystem
from .skeletal import ProductData, SkeletalData, standard_solutions, validate_skeletal
from .zeta import build_zeta, check_braiding_invariance, export_ctps, verify_ctps

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_CERT = 0, 1, 2, 3
THRESHOLD_KINDS = ("structural", "derived", "end_to_end")


@dataclass
class RunConfig:
    command: str
    args: argparse.Namespace
    thresholds: dict = field(default_factory=lambda: {"structural": 1e-10, "derived": 1e-9, "end_to_end": 1e-8})
    output: str = "human"
    seed: int = 0

    def __post_init__(self):
        for k, v in self.thresholds.items():
            if k not in THRESHOLD_KINDS:
                raise ValueError(f"unknown threshold kind {k!r}")
            if not v > 0:
                raise ValueError(f"threshold {k} must be strictly positive")


class CheckFailed(Exception):
    pass


def _parse_thresholds(items) -> dict:
    th = {"structural": 1e-10, "derived": 1e-9, "end_to_end": 1e-8}
    for item in items or []:
        if "=" in item:
            k, v = item.split("=", 1)
            k = k.strip().replace("-", "_")
            if k not in th:
                raise ValueError(f"unknown threshold kind {k!r} (use {', '.join(THRESHOLD_KINDS)})")
            th[k] = float(v)
        else:
            v = float(item)
            th = {k: v for k in th}
    return th


# -- output -------------------------------------------------------------------

class Output:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.lines: list[str] = []
        self.doc: dict = {}

    def line(self, s: str = ""):
        self.lines.append(s)

    def residual(self, name: str, value: float, threshold: float) -> bool:
        ok = bool(value < threshold)
        self.line(f"  {name:<24} {value:.3e}  (< {threshold:.0e})  {'pass' if ok else 'FAIL'}")
        return ok

    def matrix(self, title: str, M, rows, cols):
        w = max([len(str(x)) for x in list(rows) + list(cols)] + [max(len(str(int(v))) for v in np.ravel(M))] + [1])
        self.line(title)
        self.line(" " * (w + 2) + " ".join(f"{c:>{w}}" for c in cols))
        for r, row in zip(rows, M):
            self.line(f"{r:>{w}} |" + " ".join(f"{int(v):>{w}}" for v in row))

    def emit(self):
        if self.cfg.output == "json":
            sys.stdout.write(io.dumps(self.doc))
        else:
            sys.stdout.write("\n".join(self.lines) + "\n")


def _reports_doc(reports, out: Output) -> tuple[list, bool]:
    ok = True
    items = []
    for r in reports:
        ok &= out.residual(r.name, r.residual, r.threshold)
        items.append(r.to_dict())
    return items, ok


def _residual_block(out: Output, title: str, residuals: dict, threshold: float) -> tuple[dict, bool]:
    out.line(title)
    ok = True
    doc = {}
    for k in sorted(residuals):
        ok &= out.residual(k, residuals[k], threshold)
        doc[k] = {"residual": io.num(residuals[k]), "threshold": threshold}
    return doc, ok


# -- loaders ----------------------------------------------------------------------

def _model(path) -> SkeletalData:
    m = io.read_model(path)
    if isinstance(m, FusionRing):
        raise io.ParseError(str(path), "F", "this command needs F/R data")
    return m


# -- commands ---------------------------------------------------------------------

def cmd_gen(cfg: RunConfig, out: Output) -> int:
    a = cfg.args
    if a.kind == "su2k":
        data = gen_su2k(a.level)
    elif a.kind == "pointed":
        data = gen_pointed(a.n, a.q)
    else:
        data = builtin(a.name)
    if a.out:
        io.write_model(a.out, data)
    out.doc = {"generated": a.kind, "labels": list(data.ring.names), "out": a.out}
    out.line(f"generated {a.kind} model with {data.ring.rank} labels" + (f" -> {a.out}" if a.out else ""))
    if not a.out:
        out.doc = io.model_to_dict(data)
    return EXIT_OK


def cmd_validate(cfg: RunConfig, out: Output) -> int:
    m = io.read_model(cfg.args.model)
    ring = m if isinstance(m, FusionRing) else m.ring
    tol_s, tol_d = cfg.thresholds["structural"], cfg.thresholds["derived"]
    vr = validate_ring(ring, tol_d)
    out.line("fusion ring")
    for c in vr.checks:
        out.line("  " + c.line())
    out.doc["ring"] = vr.to_dict()
    ok = vr.passed
    if isinstance(m, SkeletalData):
        out.line("skeletal data")
        items, ok2 = _reports_doc(validate_skeletal(m, tol_s), out)
        out.doc["skeletal"] = items
        ok &= ok2
        try:
            sp = standard_solutions(m, tol_s)
            worst = max(max(p.residual_left, p.residual_right) for p in sp)
            ok &= out.residual("conjugate_equations", worst, tol_s)
            out.doc["conjugate_equations"] = {"residual": io.num(worst), "threshold": tol_s}
        except StructuralError as e:
            out.line(f"  conjugate_equations FAIL ({e})")
            out.doc["conjugate_equations"] = {"error": str(e)}
            ok = False
    out.doc["passed"] = bool(ok)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_qsystem(cfg: RunConfig, out: Output) -> int:
    a = cfg.args
    model = _model(a.model)
    tol = cfg.thresholds["derived"]
    if a.action == "solve":
        try:
            theta = [int(x) for x in a.theta.split(",") if x.strip()]
        except ValueError:
            raise io.ParseError("--theta", a.theta, "expected comma-separated labels") from None
        if any(not 0 <= x < model.ring.rank for x in theta):
            raise io.ParseError("--theta", a.theta, "label out of range")
        res = solve_qsystem(model, sorted(theta), seed=cfg.seed, tol=tol, commutative=a.commutative)
        if isinstance(res, NoSolution):
            out.line(f"{res.message}: best residual {res.best_residual:.3e} after {res.restarts} restarts")
            out.doc = {"found": False, "best_residual": io.num(res.best_residual), "restarts": res.restarts}
            return EXIT_FAIL
        if a.out:
            io.write_qsystem(a.out, res)
        rep = verify_qsystem(res, tol=tol, commutative=a.commutative)
        out.line(f"Q-system found, d(theta) = {res.dtheta:.12g}" + (f" -> {a.out}" if a.out else ""))
        out.doc = {"found": True, "dtheta": io.num(res.dtheta), "qsystem": io.qsystem_to_dict(res)}
        doc, ok = _residual_block(out, "residuals", rep.residuals, tol)
        out.doc["residuals"] = doc
        return EXIT_OK if ok else EXIT_FAIL
    Q = io.read_qsystem(a.qsystem, model)
    tol = cfg.thresholds["end_to_end"] if isinstance(Q.data, ProductData) else tol
    rep = verify_qsystem(Q, tol=tol, commutative=a.commutative)
    out.line(f"Q-system with {len(Q.summands)} summands, d(theta) = {Q.dtheta:.12g}")
    doc, ok = _residual_block(out, "residuals", rep.residuals, tol)
    out.doc = {"dtheta": io.num(Q.dtheta), "summands": len(Q.summands), "residuals": doc, "passed": bool(ok)}
    return EXIT_OK if ok else EXIT_FAIL


def _induction(cfg: RunConfig, out: Output):
    model = _model(cfg.args.model)
    Q = io.read_qsystem(cfg.args.qsystem, model)
    if isinstance(Q.data, ProductData):
        raise io.ParseError(cfg.args.qsystem, "system", "induction needs a single-system Q-system")
    rep = verify_qsystem(Q, tol=cfg.thresholds["derived"])
    if not rep.passed:
        out.line(f"input Q-system fails verification: {', '.join(rep.failing())}")
        raise CheckFailed
    return model, Q, Induction(Q, check=False)


def _induction_section(cfg, out, model, Q, ind, signs) -> tuple[dict, bool]:
    tol = cfg.thresholds["derived"]
    rep = coupling_matrix(Q, signs=signs, ind=ind)
    names = list(model.ring.names)
    out.matrix(f"Z (signs {''.join(rep.signs)})", rep.Z, names, names)
    doc, ok = _residual_block(out, "induction residuals", rep.residuals, tol)
    ext = check_extension_axioms(Q, signs=signs, seed=cfg.seed, ind=ind)
    edoc, ok2 = _residual_block(out, "extension axioms", ext, cfg.thresholds["end_to_end"])
    dp = check_dimension_preservation(Q, ind=ind)
    ok3 = out.residual("d(alpha)=d(lambda)", dp["residual"], tol)
    fin = rep.margins[np.isfinite(rep.margins)]
    margin = float(fin.min()) if fin.size else None
    out.line(f"  minimal certification margin: {margin:.3e}" if margin is not None else
             "  minimal certification margin: n/a (no nontrivial nullspaces)")
    return {"labels": names, "signs": "".join(rep.signs), "Z": rep.Z.astype(int).tolist(),
            "residuals": doc, "extension_axioms": edoc,
            "dimension_preservation": {"residual": io.num(dp["residual"]), "threshold": tol},
            "min_certification_margin": None if margin is None else io.num(margin)}, bool(ok and ok2 and ok3)


def cmd_induct(cfg: RunConfig, out: Output) -> int:
    model, Q, ind = _induction(cfg, out)
    doc, ok = _induction_section(cfg, out, model, Q, ind, parse_signs(cfg.args.signs))
    out.doc = {"induction": doc, "passed": ok}
    if cfg.args.out:
        io.write_json(cfg.args.out, out.doc)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_build(cfg: RunConfig, out: Output) -> int:
    a = cfg.args
    model, Q, ind = _induction(cfg, out)
    signs = parse_signs(a.signs)
    idoc, ok = _induction_section(cfg, out, model, Q, ind, signs)
    zs = build_zeta(Q, signs=signs, ind=ind)
    tol = cfg.thresholds["end_to_end"]
    rep = verify_ctps(zs, tol)
    out.line(f"CTPS: {len(zs.summands)} summands, d(theta) = {zs.dtheta:.12g}")
    cdoc, ok2 = _residual_block(out, "ctps residuals", rep.residuals, tol)
    br = check_braiding_invariance(zs)
    ok_br = out.residual("braiding_invariance", br, tol)
    Qx, ZC = export_ctps(zs)
    names = list(model.ring.names)
    out.matrix("ZC", ZC, names, names)
    if a.out:
        io.write_json(a.out, io.zeta_to_dict(zs))
    if a.export:
        io.write_qsystem(a.export, Qx)
    out.doc = {"induction": idoc,
               "ctps": {"dtheta": io.num(zs.dtheta), "summands": [list(s) for s in zs.summands],
                        "residuals": cdoc,
                        "braiding_invariance": {"residual": io.num(br), "threshold": tol,
                                                "passed": bool(ok_br)},
                        "ZC": ZC.astype(int).tolist()},
               "passed": bool(ok and ok2)}
    if a.report:
        io.write_json(a.report, out.doc)
    # braiding invariance is reported, and only enforced with --require-local
    if a.require_local and not ok_br:
        return EXIT_FAIL
    return EXIT_OK if (ok and ok2) else EXIT_FAIL


def cmd_normality(cfg: RunConfig, out: Output) -> int:
    a = cfg.args
    Z = io.read_matrix(a.z)
    r1, r2 = io.read_model(a.model1), io.read_model(a.model2)
    r1 = r1 if isinstance(r1, FusionRing) else r1.ring
    r2 = r2 if isinstance(r2, FusionRing) else r2.ring
    try:
        v = classify(Z, r1, r2)
    except InconsistentVerdict as e:
        out.line(f"internal consistency failure: {e}")
        out.doc = {"error": str(e)}
        return EXIT_FAIL
    out.line(f"verdict: {v.verdict} (coupling-matrix criteria N2 and N3)")
    out.line(f"  N2 holds: {v.n2_holds}")
    for i, j, val in v.offending:
        out.line(f"  offending entry Z[{r1.names[i]},{r2.names[j]}] = {val}")
    out.line(f"  N3 witness: {list(v.n3_witness) if v.n3_witness else 'none'}"
             + (f" ({v.n3_reason})" if v.n3_reason else ""))
    out.doc = v.to_dict()
    if a.expect and a.expect != v.verdict:
        return EXIT_FAIL
    return EXIT_OK


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ctps", description="Canonical tensor product subfactors from skeletal data.")
    p.add_argument("--threshold", action="append", metavar="[KIND=]VALUE",
                   help="override residual thresholds (kinds: structural, derived, end_to_end)")
    p.add_argument("--seed", type=int, default=0, help="seed for solver restarts and random tests")
    p.add_argument("--format", choices=("human", "json"), default="human", dest="output")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a built-in model file")
    gs = g.add_subparsers(dest="kind", required=True)
    x = gs.add_parser("su2k")
    x.add_argument("--level", type=int, required=True)
    x.add_argument("--out")
    x = gs.add_parser("pointed")
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--q", type=int, required=True, help="p in q(a) = exp(i pi p a^2 / n)")
    x.add_argument("--out")
    x = gs.add_parser("builtin")
    x.add_argument("--name", required=True, choices=("ising", "fib", "fibonacci", "semion"))
    x.add_argument("--out")

    v = sub.add_parser("validate", help="validate a model file")
    v.add_argument("--model", required=True)

    q = sub.add_parser("qsystem", help="solve or verify Q-systems")
    qs = q.add_subparsers(dest="action", required=True)
    x = qs.add_parser("solve")
    x.add_argument("--model", required=True)
    x.add_argument("--theta", required=True, help="summand labels, e.g. 0,4")
    x.add_argument("--commutative", action="store_true")
    x.add_argument("--out")
    x = qs.add_parser("verify")
    x.add_argument("--model", required=True)
    x.add_argument("--qsystem", required=True)
    x.add_argument("--commutative", action="store_true")

    for name in ("induct", "build-ctps"):
        x = sub.add_parser(name)
        x.add_argument("--model", required=True)
        x.add_argument("--qsystem", required=True)
        x.add_argument("--signs", default="+-")
        x.add_argument("--out")
        if name == "build-ctps":
            x.add_argument("--report")
            x.add_argument("--export", help="write the product Q-system here")
            x.add_argument("--require-local", action="store_true",
                           help="fail unless the braiding-invariance check passes")

    n = sub.add_parser("check-normality")
    n.add_argument("--z", required=True)
    n.add_argument("--model1", required=True)
    n.add_argument("--model2", required=True)
    n.add_argument("--expect", choices=("normal", "not_normal"))
    return p


COMMANDS = {"gen": cmd_gen, "validate": cmd_validate, "qsystem": cmd_qsystem, "induct": cmd_induct,
            "build-ctps": cmd_build, "check-normality": cmd_normality}


def run(cfg: RunConfig) -> int:
    out = Output(cfg)
    try:
        code = COMMANDS[cfg.command](cfg, out)
    except io.ParseError as e:
        sys.stderr.write(f"parse error: {e}\n")
        return EXIT_PARSE
    except UncertifiedDimension as e:
        sys.stderr.write(f"certification failure: {e}\n")
        return EXIT_CERT
    except CheckFailed:
        out.emit()
        return EXIT_FAIL
    except (StructuralError, ValueError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_FAIL
    out.emit()
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        th = _parse_thresholds(args.threshold)
        cfg = RunConfig(args.command, args, th, args.output, args.seed)
    except ValueError as e:
        parser.error(str(e))
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
