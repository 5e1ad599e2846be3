#!/usr/bin/env python3
"""Gap between the lowest two levels over atom number and chi.

One CSV for N in {3, 6, 9, 12, 15} on a 41-point log grid of
chi = J^2 / (N U^2); rows whose gap falls below the floating-point
resolution of the two sector energies carry an underflow flag.  Plot the
near-exponential fall with

    data = np.genfromtxt("out/gaps.csv", delimiter=",", names=True)
    plt.semilogy(data["chi"], data["gap"])
"""

import argparse
import sys

from catwell import cli


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="out", help="directory for the CSV file")
    ap.add_argument("-N", dest="n_list", default="3,6,9,12,15")
    ap.add_argument("--chi", default="-2:2:41", help="log10 chi grid start:stop:count")
    args = ap.parse_args()

    path = f"{args.outdir}/gaps.csv"
    # --chi= form: a bare "-2:2:41" token looks like an option to argparse
    code = cli.main(["gap-scan", "-N", args.n_list, f"--chi={args.chi}",
                     "--output", path])
    if code == 0:
        print(f"wrote {path}")
    return code


if __name__ == "__main__":
    sys.exit(main())
