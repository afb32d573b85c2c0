#!/usr/bin/env python3
"""Regenerate the golden CSVs under figures/golden/ with the gldpc CLI.

Desk-scale parameters: small blocklengths, coarse grids, fixed seeds.
Rerunning overwrites in place; outputs are deterministic.
"""

import pathlib
import sys

from gldpc.cli import main as gldpc

GOLDEN = pathlib.Path(__file__).resolve().parent.parent / "golden"

JOBS = "1"

RUNS = [
    ["ber", "--J", "2", "--K", "6", "--nu", "1.0", "--component", "R-I",
     "--eps", "0.72:0.86:0.02", "--n", "2000", "--trials", "4",
     "--decoder", "ppd", "--seed", "42", "--out", "fig3a_ppd.csv"],
    ["ber", "--J", "2", "--K", "6", "--nu", "1.0", "--component", "R-I",
     "--eps", "0.72:0.86:0.02", "--n", "2000", "--trials", "4",
     "--decoder", "mlpd", "--seed", "42", "--out", "fig3a_mlpd.csv"],
    ["sweep-nu", "--J", "2", "--K", "6", "--component", "R-I",
     "--nu-grid", "0:1:0.1", "--tol", "1e-3", "--out", "fig4a_sweep.csv"],
    ["dg-sweep", "--K", "6", "--component", "R-I", "--beta", "0",
     "--nu-grid", "0:0.5:0.1", "--tol", "1e-3", "--out", "fig11_beta0.csv"],
    ["dg-sweep", "--K", "6", "--component", "R-I", "--beta", "0.3",
     "--nu-grid", "0:0.6:0.1", "--tol", "1e-3", "--out", "fig11_beta03.csv"],
]


def main() -> int:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for run in RUNS:
        args = list(run)
        args[args.index("--out") + 1] = str(GOLDEN / args[args.index("--out") + 1])
        args += ["--jobs", JOBS]
        code = gldpc(args)
        if code != 0:
            return code
        print("wrote", args[args.index("--out") + 1])
    return 0


if __name__ == "__main__":
    sys.exit(main())
