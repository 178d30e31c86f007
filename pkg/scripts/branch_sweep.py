#!/usr/bin/env python3
"""Continue branches in speed for several kernels and emit CSV tables.

Each row carries c, E, p, J, eta_max, min_rho, a tail-decay fit, and the
Newton iteration count, ready for any plotting tool.

Usage: python scripts/branch_sweep.py [outdir]
"""

import sys
from pathlib import Path

from nlgp import (Grid, UnderresolvedTailError, continue_branch, delta,
                  exp_repulsive, fit_exponential, gaussian, shifted_deltas)
from nlgp.io import write_branch_csv

KERNELS = [
    ("delta", delta()),
    ("exp_repulsive_1_3", exp_repulsive(1.0, 3.0)),
    ("shifted_deltas_0.5", shifted_deltas(0.5)),
    ("gaussian_0.3", gaussian(0.3)),
]


def main():
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("out/branches")
    outdir.mkdir(parents=True, exist_ok=True)
    grid = Grid(128.0, 4096)
    for name, spec in KERNELS:
        branch = continue_branch(spec, grid, 0.2, 1.35)
        rates = {}
        for s in branch.solutions:
            try:
                rates[s.c] = fit_exponential(grid, s.fields.eta).rate_or_power
            except UnderresolvedTailError:
                pass
        path = outdir / f"{name}.csv"
        write_branch_csv(path, branch, decay_rates=rates)
        print(f"{name:22s} {len(branch.solutions):3d} members, "
              f"terminated: {branch.termination}; wrote {path}")


if __name__ == "__main__":
    main()
