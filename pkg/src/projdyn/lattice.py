"""Ranks of finitely generated subgroups of (C, +) and (C*, .).

Exact values live in Q(i, sqrt d). Additive ranks are Q-dimensions of the
coordinate vectors over the basis {1, i, sqrt d, i sqrt d}. Multiplicative
relations are decided exactly for Gaussian rationals by unique factorization
in Z[i]; other surds fall back to a bounded exponent search whose hits are
verified exactly. Float inputs use integer relation detection and are never
more than provisional.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .scalars import Surd

# orders of roots of unity in a quartic field divide this
TORSION_EXP = 120
PSLQ_MAXCOEFF = 10**6
BOX_BUDGET = 200_000
_KAPPA = math.e


@dataclass
class Relations:
    """Integer relations among generators, up to torsion.

    ``basis`` spans a finite-index sublattice of the relation lattice.
    ``complete`` means no further relation exists (a proof, not a search).
    """
    basis: list
    count: int
    complete: bool
    method: str
    notes: list = field(default_factory=list)

    @property
    def rank(self) -> int:
        return self.count - len(self.basis)


# rational linear algebra

def frac_rref(rows):
    R = [[Fraction(x) for x in r] for r in rows]
    if not R:
        return [], []
    n, m = len(R), len(R[0])
    piv, r = [], 0
    for c in range(m):
        p = next((i for i in range(r, n) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        f = R[r][c]
        R[r] = [x / f for x in R[r]]
        for i in range(n):
            if i != r and R[i][c] != 0:
                g = R[i][c]
                R[i] = [x - g * y for x, y in zip(R[i], R[r])]
        piv.append(c)
        r += 1
        if r == n:
            break
    return R[:r], piv


def frac_rank(rows) -> int:
    return len(frac_rref(rows)[1]) if rows else 0


def integer_nullspace(rows, m: int) -> list:
    """Primitive integer vectors spanning the rational null space of ``rows``."""
    if not rows:
        return [tuple(int(i == j) for j in range(m)) for i in range(m)]
    R, piv = frac_rref(rows)
    out = []
    for f in (c for c in range(m) if c not in piv):
        v = [Fraction(0)] * m
        v[f] = Fraction(1)
        for row, p in zip(R, piv):
            v[p] = -row[f]
        out.append(_primitive(v))
    return out


def _primitive(v) -> tuple:
    den = math.lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = math.gcd(*ints) or 1
    ints = [x // g for x in ints]
    k = next((x for x in ints if x), 1)
    return tuple(-x for x in ints) if k < 0 else tuple(ints)


def reduce_relations(vecs, m: int) -> list:
    """Independent subset (over Q) of integer relation vectors, in order."""
    out = []
    for v in vecs:
        if frac_rank(out + [list(v)]) > len(out):
            out.append(tuple(v))
    return out


# additive ranks

def surd_coords(x: Surd) -> list:
    return [x.a, x.b, x.c, x.e]


def common_d(values) -> int:
    ds = {v.d for v in values if isinstance(v, Surd) and v.d}
    if len(ds) > 1:
        from .errors import MixedSurd
        raise MixedSurd(f"values mix square roots {sorted(ds)}")
    return ds.pop() if ds else 0


def additive_rank(values) -> tuple:
    """(rank, exact) of the subgroup of (C, +) or (C^k, +) generated by ``values``.

    A value may be a scalar or a tuple of scalars (a vector group).
    """
    vals = [v if isinstance(v, (tuple, list)) else (v,) for v in values]
    vals = [v for v in vals if any(_nonzero(x) for x in v)]
    if not vals:
        return 0, True
    if all(isinstance(x, (Surd, int, Fraction)) for v in vals for x in v):
        common_d([Surd.coerce(x) for v in vals for x in v])
        rows = [[c for x in v for c in surd_coords(Surd.coerce(x))] for v in vals]
        return frac_rank(rows), True
    reals = [[part for x in v for part in (complex(x).real, complex(x).imag)] for v in vals]
    rels = _float_relations(reals, torsion=False)
    return len(vals) - len(rels), False


def _nonzero(x) -> bool:
    if isinstance(x, Surd):
        return not x.is_zero()
    return complex(x) != 0


def _float_relations(vectors, torsion: bool, extra=None) -> list:
    """Integer relations sum n_i v_i = 0 among real vectors, found greedily.

    Components are folded into one real number with powers of an arbitrary
    transcendental weight. Each vector is tested against the independent
    ones kept so far; a hit becomes a relation, a miss joins the kept set.
    """
    V = np.array(vectors, dtype=float)
    r = V.shape[0]
    scale = max(1.0, float(np.abs(V).max()))
    weights = np.array([_KAPPA ** k for k in range(V.shape[1])])
    folded = V @ weights
    found, kept = [], []
    with mpmath.workdps(30):
        for i in range(r):
            if not torsion and float(np.abs(V[i]).max()) <= 1e-12 * scale:
                found.append(tuple(int(i == j) for j in range(r)))
                continue
            xs = [mpmath.mpf(float(folded[j])) for j in kept + [i]]
            if torsion:
                xs.append(mpmath.mpf(extra))
            rel = None
            if len(xs) >= 2:
                try:
                    rel = mpmath.pslq(xs, tol=mpmath.mpf(1e-10) * scale,
                                      maxcoeff=PSLQ_MAXCOEFF, maxsteps=5_000)
                except (ValueError, ZeroDivisionError):
                    rel = None
            if rel is None or rel[len(kept)] == 0:
                kept.append(i)
                continue
            full = [0] * r
            for j, c in zip(kept + [i], rel):
                full[j] = int(c)
            resid = float(np.abs(np.array(full, dtype=float) @ V).max())
            if not torsion and resid > 1e-8 * scale * (1 + sum(abs(c) for c in full)):
                kept.append(i)
                continue
            found.append(tuple(full))
    return found


# multiplicative relations

def _factor(n: int) -> dict:
    n = abs(n)
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _split_prime(p: int) -> tuple:
    """x + y i with x^2 + y^2 = p, for a prime p = 1 mod 4."""
    for x in range(1, math.isqrt(p) + 1):
        y2 = p - x * x
        y = math.isqrt(y2)
        if y * y == y2:
            return (max(x, y), min(x, y))
    raise ValueError(p)


def _gdiv(u: tuple, pi: tuple):
    """u / pi in Z[i] when exact, else None."""
    a, b = u
    x, y = pi
    n = x * x + y * y
    re, im = a * x + b * y, b * x - a * y
    if re % n or im % n:
        return None
    return (re // n, im // n)


def _gval(u: tuple, pi: tuple) -> int:
    k = 0
    while True:
        q = _gdiv(u, pi)
        if q is None:
            return k
        u, k = q, k + 1


def gaussian_valuations(z: Surd) -> dict:
    """Valuations of a nonzero Gaussian rational at the Gaussian primes dividing it."""
    den = math.lcm(z.a.denominator, z.b.denominator)
    u = (int(z.a * den), int(z.b * den))
    norm = u[0] ** 2 + u[1] ** 2
    out = {}
    ps = set(_factor(norm)) | set(_factor(den))
    for p in sorted(ps):
        vd = _factor(den).get(p, 0)
        if p == 2:
            out[(2, 0)] = _gval(u, (1, 1)) - 2 * vd
        elif p % 4 == 3:
            out[(p, 0)] = _gval(u, (p, 0)) - vd
        else:
            x, y = _split_prime(p)
            out[(p, 1)] = _gval(u, (x, y)) - vd
            out[(p, -1)] = _gval(u, (x, -y)) - vd
    return {k: v for k, v in out.items() if v}


def _is_gaussian(x) -> bool:
    return isinstance(x, (int, Fraction)) or (isinstance(x, Surd) and x.d == 0)


def exact_product(values, exps) -> Surd:
    out = Surd(1)
    for v, e in zip(values, exps):
        if e:
            out = out * Surd.coerce(v) ** int(e)
    return out


def torsion_order(z: Surd, limit: int = TORSION_EXP):
    """Least k <= limit with z^k = 1, else None."""
    w = Surd(1)
    for k in range(1, limit + 1):
        w = w * z
        if w == 1:
            return k
    return None


def mult_relations(values, bound: int = 20) -> Relations:
    """Relations prod v_i^{n_i} = root of unity among nonzero scalars."""
    vals = list(values)
    r = len(vals)
    if r == 0:
        return Relations([], 0, True, "empty")
    if all(_is_gaussian(v) for v in vals):
        zs = [Surd.coerce(v) for v in vals]
        vs = [gaussian_valuations(z) for z in zs]
        keys = sorted(set().union(*vs))
        rows = [[vs[i].get(k, 0) for i in range(r)] for k in keys]
        return Relations(integer_nullspace(rows, r), r, True, "gaussian-factorization")
    if all(isinstance(v, (Surd, int, Fraction)) for v in vals):
        zs = [Surd.coerce(v) for v in vals]
        common_d(zs)
        hits = _box_search([complex(z) for z in zs], bound)
        good = [h for h in hits if torsion_order(exact_product(zs, h)) is not None]
        basis = reduce_relations(good, r)
        complete = len(basis) == r
        return Relations(basis, r, complete, f"exact-verified search |n_i| <= {bound}",
                         [] if complete else ["relation lattice complete only up to the search bound"])
    cs = [complex(v) for v in vals]
    vecs = [[math.log(abs(c))] for c in cs]
    thetas = [cmath.phase(c) / (2 * math.pi) for c in cs]
    rels = _float_torsion_relations(vecs, thetas)
    return Relations(rels, r, False, "float integer-relation search",
                     ["provisional: float relations up to coefficient 1e6"])


def _box_search(cs, bound: int) -> list:
    r = len(cs)
    B = max(1, min(bound, int(BOX_BUDGET ** (1.0 / r) // 2)))
    L = np.array([math.log(abs(c)) for c in cs])
    T = np.array([cmath.phase(c) / (2 * math.pi) for c in cs])
    hits = []
    for n in itertools.product(range(-B, B + 1), repeat=r):
        k = next((x for x in n if x), 0)
        if k <= 0:
            continue
        nv = np.array(n, dtype=float)
        if abs(nv @ L) > 1e-9 * (1 + np.abs(nv).sum() * np.abs(L).max()):
            continue
        t = (nv @ T) * TORSION_EXP
        if abs(t - round(t)) > 1e-6:
            continue
        if math.gcd(*n) != 1:
            continue
        hits.append(n)
    hits.sort(key=lambda n: (sum(abs(x) for x in n), n))
    return hits


def _float_torsion_relations(vecs, thetas) -> list:
    """Relations with sum n_i log|v_i| = 0 and sum n_i theta_i in (1/120) Z."""
    r = len(vecs)
    out = []
    live = []
    for i in range(r):
        t = thetas[i] * TORSION_EXP
        if abs(vecs[i][0]) <= 1e-10 and abs(t - round(t)) <= 1e-6:
            out.append(tuple(int(i == j) for j in range(r)))
        else:
            live.append(i)
    if len(live) >= 1:
        rows = [[vecs[i][0] + _KAPPA * thetas[i]] for i in live]
        sub = _float_relations(rows, torsion=True, extra=_KAPPA / TORSION_EXP)
        found = []
        for rel in sub:
            full = [0] * r
            for i, c in zip(live, rel):
                full[i] = c
            found.append(tuple(full))
    else:
        found = []
    for rel in found:
        s = sum(c * vecs[i][0] for i, c in enumerate(rel))
        t = sum(c * thetas[i] for i, c in enumerate(rel)) * TORSION_EXP
        if abs(s) <= 1e-8 and abs(t - round(t)) <= 1e-6:
            out.append(rel)
    return reduce_relations(out, r)


def mult_rank(values, bound: int = 20) -> tuple:
    """(rank, proven) of the subgroup of C* generated by ``values`` (mod torsion)."""
    vals = [v for v in values]
    if not vals:
        return 0, True
    rel = mult_relations(vals, bound)
    return rel.rank, rel.complete
