"""Compare the holonomy of a perturbed cusp with its pull-back by a tangent-to-identity map.

    python3 scripts/same_holonomy_demo.py --order 5
"""

import argparse
import math
import time

from qhfol import holonomy as H
from qhfol.algebra import BiPoly
from qhfol.diffeo import rotate_multiplier, same_holonomy_test
from qhfol.forms import OneForm
from qhfol.quasihom import Weight, rotational_form


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--order", type=int, default=5)
    ap.add_argument("--tol", type=float, default=1e-4)
    ap.add_argument("--rotate", type=float, default=0.6, help="multiplier rotation, in units of pi")
    args = ap.parse_args()
    P = BiPoly.parse
    omega0 = OneForm.exact(P("y^2-x^3")) + rotational_form(Weight(2, 3, 6)).scale(P("x*y"))
    omega1 = omega0.pullback(P("x+x^2"), P("y+x*y"))
    t0 = time.perf_counter()
    rep0, rep1 = H.holonomy_rep(omega0), H.holonomy_rep(omega1)
    print(f"two reps in {time.perf_counter() - t0:.2f} s")
    v = same_holonomy_test(rep0, rep1, n=args.order, tol=args.tol)
    print(f"pull-back: conjugate={v.conjugate} order={v.order} max residual={max(max(r) for r in v.residuals):.1e}")
    wrong = [g.diffeo for g in rep1.generators]
    wrong[0] = rotate_multiplier(wrong[0], args.rotate * math.pi)
    v = same_holonomy_test(rep0, wrong, n=args.order, tol=args.tol)
    print(f"rotated:   conjugate={v.conjugate} obstruction={v.obstruction}")


if __name__ == "__main__":
    main()
