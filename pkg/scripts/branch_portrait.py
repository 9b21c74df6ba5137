#!/usr/bin/env python3
"""Dump CSV tables for the standard portrait plots: the forward map, both
inverse branches, and the transition function for several asymmetries.

Usage:
    python scripts/branch_portrait.py --outdir out/
"""

import argparse
import math
import pathlib

from pqlambert import BranchId, branch_constants, forward, omega, psi


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format(v, ".17g") for v in row) + "\n")
    print(f"wrote {path}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="out")
    ap.add_argument("--count", type=int, default=400)
    args = ap.parse_args()
    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    a = 2.0 / 3.0
    rows = []
    for i in range(args.count):
        w = -8.0 + 9.0 * i / (args.count - 1)
        rows.append((w, forward(a, w), w * math.exp(w)))
    write_csv(outdir / "forward_map.csv", ["w", "f", "w_exp_w"], rows)

    bc = branch_constants(a)
    rows = []
    for i in range(args.count):
        x = bc.f_min + (5.0 - bc.f_min) * i / (args.count - 1)
        row = [x, psi(a, BranchId.PRINCIPAL, x)]
        row.append(psi(a, BranchId.LOWER, x) if x < 0.0 else math.nan)
        rows.append(tuple(row))
    write_csv(outdir / "branches.csv", ["x", "psi0", "psi1"], rows)

    zs = [-math.exp(math.log(1e-3) + (math.log(10.0) - math.log(1e-3)) * i
                    / (args.count - 1)) for i in range(args.count)]
    header = ["z"] + [f"omega_a{int(100 * av):03d}" for av in (0.0, 0.5, 0.75, 0.875)]
    rows = [tuple([z] + [omega(av, z) for av in (0.0, 0.5, 0.75, 0.875)])
            for z in sorted(zs)]
    write_csv(outdir / "transition.csv", header, rows)


if __name__ == "__main__":
    main()
