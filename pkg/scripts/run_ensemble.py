"""Diagonalize a generated ensemble and summarize how tight each certified bound is.

    python3 scripts/run_ensemble.py --count 500 --modes 8 --lo 0.05 --hi 0.95 --out ensemble.csv
"""

import argparse
import logging

import numpy as np

from bogoliubov.cli import EnsembleConfig, run_ensemble
from bogoliubov.io import write_ensemble_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--modes", type=int, default=6)
    ap.add_argument("--lo", type=float, default=0.05)
    ap.add_argument("--hi", type=float, default=0.9)
    ap.add_argument("--kind", default="random")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    logging.basicConfig(level=logging.WARNING)

    cfg = EnsembleConfig(args.count, args.modes, args.lo, args.hi, args.seed, args.kind, jobs=args.jobs)
    rows, failed = run_ensemble(cfg)
    if args.out:
        write_ensemble_csv(rows, args.out)

    col = lambda k: np.array([r[k] for r in rows])  # noqa: E731
    op = col("v_opnorm") / col("v_opnorm_bound")
    hs_bound = col("v_hs_bound")
    hs = np.divide(col("v_hs"), hs_bound, out=np.zeros_like(hs_bound), where=hs_bound > 0)
    energy = np.divide(col("e0"), col("lower_bound"), out=np.zeros(len(rows)), where=col("lower_bound") < 0)
    print(f"instances            {len(rows)}  (failed certificates: {len(failed)})")
    print(f"||V|| / bound        max {op.max():.6f}  median {np.median(op):.6f}")
    print(f"||V||_HS / bound     max {hs.max():.6f}  median {np.median(hs):.6f}")
    print(f"E0 / (-Tr/2)         max {energy.max():.6f}  median {np.median(energy):.6f}")
    print(f"max eq. residual     {col('max_diag_eq_residual').max():.3e}")
    for seed, f in failed[:5]:
        print(f"  seed {seed}: {f}")


if __name__ == "__main__":
    main()
