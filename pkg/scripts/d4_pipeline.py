"""Run the full CLI pipeline for the D4 extension of SU(2)_4 into a directory.

    python3 scripts/d4_pipeline.py [outdir]
"""
import sys
from pathlib import Path

from ctps.cli import main


def step(*argv):
    argv = [str(a) for a in argv]
    print("$ ctps", " ".join(argv))
    code = main(argv)
    if code:
        sys.exit(f"step failed with exit code {code}")


def run(out: Path):
    out.mkdir(parents=True, exist_ok=True)
    model, q = out / "su2k4.json", out / "d4-qsystem.json"
    step("gen", "su2k", "--level", 4, "--out", model)
    step("validate", "--model", model)
    step("qsystem", "solve", "--model", model, "--theta", "0,4", "--commutative", "--out", q)
    step("induct", "--model", model, "--qsystem", q, "--signs", "+-", "--out", out / "induction.json")
    step("build-ctps", "--model", model, "--qsystem", q, "--signs", "+-", "--out", out / "zeta.json",
         "--report", out / "ctps-report.json", "--export", out / "ctps-qsystem.json", "--require-local")
    step("qsystem", "verify", "--model", model, "--qsystem", out / "ctps-qsystem.json")
    step("check-normality", "--z", out / "induction.json", "--model1", model, "--model2", model,
         "--expect", "not_normal")


if __name__ == "__main__":
    run(Path(sys.argv[1] if len(sys.argv) > 1 else "d4-run"))
