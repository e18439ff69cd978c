#!/usr/bin/env python3
"""Tabulate the rate-optimal design and its certificate across conditioning.

For each condition ratio kappa on a log grid this prints the optimal step
size, momentum weight and contraction factor together with the certificate
(Schur check, frequency-domain margin, scanned worst-case rate).  Optionally
writes the same table as CSV.
"""

import argparse

import numpy as np

from ramptrack import SectorBounds, certify, design_optimal
from ramptrack.output import write_csv

COLUMNS = ["kappa", "alpha", "gamma", "rho_star", "schur_ok", "spr_margin", "r_rate"]


def rows_for(kappas, m):
    for kappa in kappas:
        bounds = SectorBounds(m, kappa * m)
        design = design_optimal(bounds)
        cert = certify(design.params(), bounds)
        yield [
            kappa,
            design.alpha_star,
            design.gamma_star,
            design.rho_star,
            cert.schur_ok,
            cert.spr_margin,
            cert.r_rate,
        ]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--m", type=float, default=0.1, help="sector lower bound")
    parser.add_argument("--kappa-min", type=float, default=1.1)
    parser.add_argument("--kappa-max", type=float, default=1000.0)
    parser.add_argument("--points", type=int, default=13)
    parser.add_argument("--csv", default=None, help="also write the table here")
    args = parser.parse_args()

    kappas = np.geomspace(args.kappa_min, args.kappa_max, args.points)
    table = list(rows_for(kappas, args.m))

    print(
        f"{'kappa':>10}{'alpha':>12}{'gamma':>12}{'rho*':>12}"
        f"{'schur':>7}{'margin':>12}{'r_rate':>12}"
    )
    for kappa, alpha, gamma, rho, schur, margin, rate in table:
        print(
            f"{kappa:>10.3f}{alpha:>12.6f}{gamma:>12.6f}{rho:>12.8f}"
            f"{str(bool(schur)):>7}{margin:>12.4e}{rate:>12.8f}"
        )

    if args.csv:
        write_csv(args.csv, COLUMNS, table)
        print(f"wrote {args.csv}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
