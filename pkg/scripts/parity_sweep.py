#!/usr/bin/env python3
"""Parity fringes of the N = 9 ground state across the interaction range.

Writes one CSV per interaction strength plus the ideal cat reference into
--outdir, all on the same 721-point phase grid, so the files can be laid
over each other directly.  Plot with e.g.

    data = np.genfromtxt("out/parity_U-1.csv", delimiter=",", names=True)
    plt.plot(data["theta"], data["parity"])
"""

import argparse
import sys

from catwell import cli

INTERACTIONS = (0.0, -0.1, -0.25, -1.0, -10.0)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="out", help="directory for the CSV files")
    ap.add_argument("-N", dest="n_atoms", type=int, default=9)
    ap.add_argument("--theta", default="0:6.283185307179586:721")
    args = ap.parse_args()

    base = ["scan-parity", "-N", str(args.n_atoms), "--theta", args.theta]
    runs = [(["--state", "cat"], "parity_cat.csv")]
    runs += [
        (["-U", str(u), "--state", "ground"], f"parity_U{u:g}.csv")
        for u in INTERACTIONS
    ]
    for extra, name in runs:
        path = f"{args.outdir}/{name}"
        code = cli.main(base + extra + ["--output", path])
        if code != 0:
            return code
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
