"""Survey SU(2)_k: structural residuals, Verlinde, and the simple-current extensions.

For k divisible by 4, theta = 0 + k is commutative and gives a non-diagonal CTPS;
for other even k it is a non-commutative Q-system whose CTPS is diagonal.

    python3 scripts/su2k_survey.py [--max-level 8]
"""
import argparse
import time

import numpy as np

from ctps import (Induction, build_zeta, check_braiding_invariance, classify, coupling_matrix, gen_su2k,
                  solve_qsystem, validate_skeletal, verify_ctps, verlinde_fusion)
from ctps.qsystem import NoSolution


def survey(k: int) -> str:
    t0 = time.perf_counter()
    data = gen_su2k(k)
    struct = max(r.residual for r in validate_skeletal(data))
    _, vres = verlinde_fusion(data.ring.S)
    line = f"k={k:2d}  structural {struct:.1e}  verlinde {vres:.1e}"
    if k % 2 == 0 and k > 0:
        Q = solve_qsystem(data, {0: 1, k: 1})
        if isinstance(Q, NoSolution):
            line += f"  theta=0+{k}: no solution ({Q.best_residual:.2e})"
        else:
            ind = Induction(Q)
            Z = coupling_matrix(Q, ind=ind).Z
            zs = build_zeta(Q, ind=ind)
            worst = max(verify_ctps(zs).residuals.values())
            loc = check_braiding_invariance(zs)
            verdict = classify(Z, data.ring, data.ring).verdict
            line += (f"  theta=0+{k}: d(theta_ctps)={zs.dtheta:.6g} ctps {worst:.1e} local {loc:.1e} "
                     f"{verdict}, nonzero Z entries {int(np.count_nonzero(Z))}")
    return line + f"  [{time.perf_counter() - t0:.1f}s]"


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-level", type=int, default=8)
    args = ap.parse_args()
    for k in range(1, args.max_level + 1):
        print(survey(k), flush=True)
