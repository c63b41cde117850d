"""Resolve y^a - x^b for coprime a < b <= N and compare with the Euclid prediction.

    python3 scripts/euclid_sweep.py --max 8
"""

import argparse
import time
from math import gcd

from qhfol.algebra import BiPoly
from qhfol.desing import euclid_quotients, resolve_foliation, same_desingularization, verify_prediction
from qhfol.errors import NotSingular
from qhfol.forms import OneForm
from qhfol.quasihom import infer_weights


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max", type=int, default=8)
    args = ap.parse_args()
    print(f"{'a':>3} {'b':>3}  {'quotients':<14} {'comps':>5} {'match':>5} {'foliation':>9} {'ms':>7}")
    for a in range(1, args.max):
        for b in range(a + 1, args.max + 1):
            if gcd(a, b) != 1:
                continue
            f = BiPoly({(0, a): 1, (b, 0): -1})
            t0 = time.perf_counter()
            report = verify_prediction(f)
            q = euclid_quotients(infer_weights(f)).quotients
            try:
                agree = same_desingularization(report.computed, resolve_foliation(OneForm.exact(f)))
            except NotSingular:
                agree = "regular"
            ms = 1e3 * (time.perf_counter() - t0)
            print(f"{a:>3} {b:>3}  {str(list(q)):<14} {len(report.computed.components):>5} "
                  f"{str(report.match):>5} {str(agree):>9} {ms:7.1f}")


if __name__ == "__main__":
    main()
