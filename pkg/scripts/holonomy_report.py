"""Holonomy generators of the central component, compared with exp(2 pi i lambda).

    python3 scripts/holonomy_report.py "d(y^2-x^3)" --order 8
"""

import argparse
import cmath
import math
import time

from qhfol import holonomy as H
from qhfol.cli import parse_input
from qhfol.forms import OneForm


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("input", nargs="?", default="d(y^2-x^3)")
    ap.add_argument("--order", type=int, default=8)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    kind, obj = parse_input(args.input)
    omega = OneForm.exact(obj) if kind == "curve" else obj
    t0 = time.perf_counter()
    rep = H.holonomy_rep(omega, H.NumericParams(order=args.order), jobs=args.jobs)
    print(f"central component D{rep.central}, {len(rep.generators)} generators, {time.perf_counter() - t0:.2f} s")
    for g in rep.generators:
        c1 = g.diffeo.coeffs[0]
        line = f"  {g.label:>6}: c1 = {c1.real:+.12f}{c1.imag:+.12f}i  err {g.error:.1e}"
        if g.lam is not None:
            line += f"  |c1 - e^(2 pi i lambda)| = {abs(c1 - cmath.exp(2j * math.pi * complex(g.lam))):.1e}"
        print(line)
    # the loops multiply to a loop around every point, so the product is near the identity
    prod = rep.product.scaled(rep.rho)
    print(f"product jet (z scaled by rho={rep.rho:.3g}):", " ".join(f"{abs(c):.1e}" for c in prod.coeffs))


if __name__ == "__main__":
    main()
