"""Witnesses for condition (F) in the group W = Z + Z sqrt2, mu(1) = e^-1, mu(sqrt2) = e^sqrt2.

For q -> -inf take p = ceil(q sqrt2 + log(2 sqrt2 |q|) / 3).  Then w = p + q sqrt2
runs off to infinity, mu(w) = e^(-p + q sqrt2) tends to 0, and |w| mu(w)^3 stays
in [e^-3, 1] (up to o(1)), so (F) holds.  Also compares with the package's own search.
"""
import argparse

import mpmath

from projdyn.scalars import Surd
from projdyn.triangular import WmuSpec, classify_case1, f_witnesses


def witness(q: int):
    s2 = mpmath.sqrt(2)
    p = int(mpmath.ceil(q * s2 + mpmath.log(2 * s2 * abs(q)) / 3))
    w = p + q * s2
    mu = mpmath.exp(-p + q * s2)
    return p, q, w, mu


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--digits", type=int, default=50)
    ap.add_argument("--levels", type=int, default=8, help="q = -10^1 .. -10^levels")
    a = ap.parse_args()
    mpmath.mp.dps = a.digits
    print(f"{'p':>12} {'q':>12} {'|w|':>14} {'mu(w)':>14} {'|w| mu^3':>10}")
    for k in range(1, a.levels + 1):
        p, q, w, mu = witness(-10 ** k)
        print(f"{p:>12} {q:>12} {mpmath.nstr(abs(w), 8):>14} {mpmath.nstr(mu, 8):>14} "
              f"{mpmath.nstr(abs(w) * mu ** 3, 6):>10}")
    spec = WmuSpec([1, Surd.sqrt(2)], mu_log=[(-1, 0), (Surd.sqrt(2), 0)])
    res = classify_case1(spec)
    print(f"\nclassify_case1: case {res.case}, (F) {res.condition_f}, set {res.kulkarni.describe()}")
    print("package witnesses (p, q):", [tuple(x["n"]) for x in f_witnesses(spec)])


if __name__ == "__main__":
    main()
