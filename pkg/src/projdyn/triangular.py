"""Upper triangular groups: lambda maps, layers, cones and Kulkarni cases.

Exact inputs (``Surd`` entries) are decided exactly wherever the field allows
it. Float inputs and bounded searches produce results that carry a
provenance string and a provisional tag; nothing undecided is guessed.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from . import lattice as lt
from . import linalg as la
from .classify import probe_rational
from .errors import (InputError, NoLoxodromic, NotTriangular, UnresolvedDependence,
                     UnresolvedFlags, UnsupportedClass)
from .limits import LimitSetDescriptor
from .proj import ProjMap, ProjSubspace, basis_point, coordinate_subspace, span
from .scalars import TAU, Surd

LAYERS = ("Layer1_Core", "Layer2_AminusCore", "Layer3_Ker23minusA", "Layer4_rest")
UNKNOWN = "unknown"


# scalar helpers

def _exact_scalar(x) -> bool:
    return isinstance(x, (Surd, int, Fraction))


def _zero(x, scale: float = 1.0) -> bool:
    if isinstance(x, Surd):
        return x.is_zero()
    return abs(complex(x)) <= TAU * scale


def _same(x, y, scale: float = 1.0) -> bool:
    if isinstance(x, Surd) and isinstance(y, Surd):
        return x == y
    return abs(complex(x) - complex(y)) <= TAU * max(scale, abs(complex(x)), abs(complex(y)))


def _is_one(x) -> bool:
    return _same(x, Surd(1) if isinstance(x, Surd) else 1.0)


def _div(x, y):
    if isinstance(x, Surd) or isinstance(y, Surd):
        return Surd.coerce(x) / Surd.coerce(y)
    return complex(x) / complex(y)


def _as_matrix(g):
    M = g.matrix if isinstance(g, ProjMap) else g
    if la.is_exact(M):
        return la.exact_mat(M), True
    return np.asarray(M, dtype=complex), False


def _triangular(g):
    """Matrix of g after checking it is upper triangular."""
    M, exact = _as_matrix(g)
    n = len(M)
    scale = 1.0 if exact else float(np.abs(M).max())
    for i in range(n):
        for j in range(i):
            if not _zero(M[i][j], scale):
                raise NotTriangular(f"entry ({i + 1},{j + 1}) is nonzero")
    if n != 3:
        raise InputError("triangular tools expect 3x3 matrices")
    return M, exact, scale


# lambda maps, layers, F-classes

def lambda_maps(g) -> tuple:
    """(lambda12, lambda23, lambda13) = (a11/a22, a22/a33, a11/a33)."""
    M, _, _ = _triangular(g)
    return _div(M[0][0], M[1][1]), _div(M[1][1], M[2][2]), _div(M[0][0], M[2][2])


def layer_of(g) -> str:
    """Four-layer tag: Core, A minus Core, Ker lambda23 minus A, the rest."""
    M, _, scale = _triangular(g)
    l12, l23, _ = lambda_maps(g)
    unit = _is_one(l12) and _is_one(l23)
    if unit:
        return LAYERS[0] if _zero(M[1][2], scale) else LAYERS[1]
    if _is_one(l23):
        return LAYERS[2]
    return LAYERS[3]


def f_class(g) -> str:
    """F1..F4 by which of the entries a12, a23 vanish."""
    M, _, scale = _triangular(g)
    z12, z23 = _zero(M[0][1], scale), _zero(M[1][2], scale)
    if z12 and z23:
        return "F1"
    if not z12 and z23:
        return "F2"
    if z12:
        return "F3"
    return "F4"


def core_coords(g) -> tuple:
    """(x, y) of a Core element g_{x,y} = [[1,x,y],[0,1,0],[0,0,1]]."""
    M, _, _ = _triangular(g)
    if layer_of(g) != LAYERS[0]:
        raise InputError("element is not in Core")
    return _div(M[0][1], M[0][0]), _div(M[0][2], M[0][0])


def g_xy(x, y) -> ProjMap:
    """The Core element with translation part (x, y)."""
    if _exact_scalar(x) and _exact_scalar(y):
        return ProjMap(la.exact_mat([[1, x, y], [0, 1, 0], [0, 0, 1]]))
    return ProjMap(np.array([[1, x, y], [0, 1, 0], [0, 0, 1]], dtype=complex))


# cone

@dataclass
class ConeDescriptor:
    """Pencil of lines l_{x,y} = <e1, [0:-y:x]> through e1."""
    generators: list
    lines: list

    def contains_line(self, l: ProjSubspace, tol: float = 1e-9) -> bool:
        return any(c.equals(l, tol) for c in self.lines)


def cone_line(x, y) -> ProjSubspace:
    exact = _exact_scalar(x) and _exact_scalar(y)
    e1 = basis_point(1, 2, exact).lift
    if exact:
        v = la.exact_vec([0, -Surd.coerce(y), Surd.coerce(x)])
    else:
        v = np.array([0, -complex(y), complex(x)])
    if la.is_zero_vec(v):
        raise InputError("(0, 0) is the identity; it spans no line")
    return span(e1, v)


def cone_of(core_elements) -> ConeDescriptor:
    gens, lines = [], []
    for c in core_elements:
        x, y = core_coords(c) if isinstance(c, ProjMap) else c
        if _zero(x) and _zero(y):
            continue
        l = cone_line(x, y)
        if any(m.equals(l) for m in lines):
            continue
        gens.append((x, y))
        lines.append(l)
    return ConeDescriptor(gens, lines)


def cone_push(gamma, xy) -> tuple:
    """gamma(l_{x,y}) = l_{x', y'} with x' = g33 x, y' = g22 y - g23 x."""
    M, _, _ = _triangular(gamma)
    x, y = xy
    if any(isinstance(t, Surd) for t in (x, y, M[1][1])):
        x, y = Surd.coerce(x) if _exact_scalar(x) else x, Surd.coerce(y) if _exact_scalar(y) else y
    return M[2][2] * x, M[1][1] * y - M[1][2] * x


# Gamma_{W, mu}

@dataclass
class WmuSpec:
    """Additive W = Z w_1 + ... + Z w_r with a homomorphism mu into C*.

    mu is given either by values ``mu_gens`` or by ``mu_log`` pairs
    (log|mu(w_i)|, arg mu(w_i) / 2 pi); exact pairs in Q(sqrt d) let the
    rotation and (F) questions be decided exactly even when mu itself is
    transcendental, as in mu(1) = e^{-1}.
    """
    w_gens: list
    mu_gens: list | None = None
    mu_log: list | None = None
    flags: dict = field(default_factory=dict)

    def __post_init__(self):
        r = len(self.w_gens)
        if r == 0:
            raise InputError("W needs at least one generator")
        if (self.mu_gens is None) == (self.mu_log is None):
            raise InputError("give exactly one of mu_gens, mu_log")
        mu = self.mu_gens if self.mu_gens is not None else self.mu_log
        if len(mu) != r:
            raise InputError("one mu value per generator of W")
        if r > 3:
            raise InputError("rank(W) <= 3 for a discrete Gamma_{W,mu}")
        if self.mu_gens is not None and any(_zero(m) if not isinstance(m, Surd) else m.is_zero()
                                            for m in self.mu_gens):
            raise InputError("mu takes values in C*")
        for k in self.flags:
            if k not in ("w_discrete", "mu_has_rational_rotation", "mu_has_irrational_rotation"):
                raise InputError(f"unknown flag {k}")

    @property
    def rank(self) -> int:
        return len(self.w_gens)

    def w_exact(self) -> bool:
        return all(_exact_scalar(w) for w in self.w_gens)

    def log_exact(self) -> bool:
        return self.mu_log is not None and all(_exact_scalar(a) and _exact_scalar(t)
                                               for a, t in self.mu_log)

    def mu_exact(self) -> bool:
        return self.mu_gens is not None and all(_exact_scalar(m) for m in self.mu_gens)

    def mu_complex(self) -> list:
        if self.mu_gens is not None:
            return [complex(m) for m in self.mu_gens]
        return [cmath.exp(complex(float(_real(a)), 2 * math.pi * float(_real(t))))
                for a, t in self.mu_log]

    def log_floats(self) -> tuple:
        """(log|mu_i|, arg mu_i / 2 pi) as floats."""
        if self.mu_log is not None:
            return ([float(_real(a)) for a, _ in self.mu_log],
                    [float(_real(t)) for _, t in self.mu_log])
        cs = self.mu_complex()
        return [math.log(abs(c)) for c in cs], [cmath.phase(c) / (2 * math.pi) for c in cs]

    def generators(self) -> list:
        """gamma_{w_i} = [[mu^-3, 0, 0], [0, 1, w], [0, 0, 1]]."""
        out = []
        if self.mu_exact() and self.w_exact():
            for w, m in zip(self.w_gens, self.mu_gens):
                m = Surd.coerce(m)
                out.append(ProjMap(la.exact_mat([[m ** -3, 0, 0], [0, 1, w], [0, 0, 1]])))
            return out
        for w, m in zip(self.w_gens, self.mu_complex()):
            out.append(ProjMap(np.array([[m ** -3, 0, 0], [0, 1, complex(w)], [0, 0, 1]])))
        return out


def _real(x):
    if isinstance(x, Surd):
        if not x.is_real():
            raise InputError("log data must be real")
        return x
    if _exact_scalar(x):
        return Surd.coerce(x)
    return float(x)


@dataclass
class Decision:
    value: object            # True, False or "unknown"
    provenance: str
    provisional: bool = False

    def as_dict(self) -> dict:
        return {"value": self.value, "provenance": self.provenance,
                "provisional": self.provisional}


@dataclass
class Case1Result:
    case: str
    condition_f: str
    kulkarni: LimitSetDescriptor
    cyclic: bool
    decisions: dict
    witnesses: list
    notes: list

    @property
    def provisional(self) -> bool:
        return any(d.provisional for d in self.decisions.values())

    def as_dict(self) -> dict:
        return {
            "case": self.case,
            "condition_F": self.condition_f,
            "kulkarni": self.kulkarni.describe(),
            "cyclic": self.cyclic,
            "decisions": {k: v.as_dict() for k, v in sorted(self.decisions.items())},
            "witnesses": self.witnesses,
            "provisional": self.provisional,
            "notes": list(self.notes),
        }


def _lines(*index_sets, exact: bool = True) -> LimitSetDescriptor:
    return LimitSetDescriptor([coordinate_subspace(ix, 2, exact) for ix in index_sets])


def _real_rows(values) -> list:
    """Rows (Re v_i)_i and (Im v_i)_i, exact when possible."""
    if all(_exact_scalar(v) for v in values):
        vs = [Surd.coerce(v) for v in values]
        return [tuple(v.real for v in vs), tuple(v.imag for v in vs)]
    cs = [complex(v) for v in values]
    return [np.array([c.real for c in cs]), np.array([c.imag for c in cs])]


def _decide_w_discrete(spec: WmuSpec) -> Decision:
    r = spec.rank
    rows = _real_rows(spec.w_gens)
    if spec.w_exact():
        rr = la.rank(rows)
        return Decision(rr == r, "exact: Q-rank vs R-rank of W")
    A = np.array(rows, dtype=float)
    s = np.linalg.svd(A, compute_uv=False)
    rr = int(np.sum(s > 1e-9 * s[0])) if s[0] > 0 else 0
    if rr == r:
        return Decision(True, "float: generators R-independent (svd)", True)
    # W is discrete iff its real relation space has a rational basis
    null = la.nullspace(A.astype(complex), 1e-9)
    R, piv = la.rref(np.array(null), 1e-9)
    for row in R:
        for x in row:
            if abs(x.imag) > 1e-9 or probe_rational(x.real, qmax=10**4) is None:
                return Decision(UNKNOWN, "float: relation search up to 1e4 exhausted")
    return Decision(True, "float: real relations look rational (q <= 1e4)", True)


def _rotation_decisions(spec: WmuSpec, bound: int):
    """(kernel basis, rational Decision, irrational Decision) for mu(W) on |mu| = 1."""
    r = spec.rank
    if spec.log_exact():
        a = [_real(x) for x, _ in spec.mu_log]
        t = [_real(y) for _, y in spec.mu_log]
        lt.common_d(a + t)
        rows = [[x.a for x in a], [x.c for x in a]]
        K = lt.integer_nullspace(rows, r)
        thetas = [sum((ti * k for ti, k in zip(t, vec)), Surd(0)) for vec in K]
        irr = any(th.c != 0 for th in thetas)
        rat = len(K) >= 2 or (len(K) == 1 and thetas[0].c == 0)
        prov = "exact: log data in Q(sqrt d)"
        return K, Decision(rat, prov), Decision(irr, prov)
    if spec.mu_exact():
        mus = [Surd.coerce(m) for m in spec.mu_gens]
        rel = lt.mult_relations([m.abs2() for m in mus], bound)
        K = rel.basis
        units = [lt.exact_product(mus, k) for k in K]
        irr_hit = any(lt.torsion_order(u) is None for u in units)
        urel = lt.mult_relations(units, bound) if units else lt.Relations([], 0, True, "empty")
        rat_hit = len(urel.basis) > 0
        proven = rel.complete and urel.complete
        how = f"exact values: {rel.method}"
        rat = Decision(True if rat_hit else (False if proven else UNKNOWN), how)
        irr = Decision(True if irr_hit else (False if rel.complete else UNKNOWN), how)
        return K, rat, irr
    a, t = spec.log_floats()
    found = lt._float_relations([[x] for x in a], torsion=False)
    K = lt.reduce_relations(found, r)
    if not K:
        d = Decision(UNKNOWN, "float: no unit-modulus relation found (search exhausted)")
        return K, d, d
    thetas = [sum(ti * k for ti, k in zip(t, vec)) for vec in K]
    irr = any(probe_rational(th, qmax=10**4) is None for th in thetas)
    rat = any(probe_rational(th, qmax=10**4) is not None for th in thetas)
    how = "float: relation search and continued fractions"
    return K, Decision(True if rat else UNKNOWN, how, True), \
        Decision(True if irr else UNKNOWN, how, True)


def _apply_flag(d: Decision, spec: WmuSpec, key: str) -> Decision:
    v = spec.flags.get(key, UNKNOWN)
    if v in (None, UNKNOWN):
        return d
    if not isinstance(v, bool):
        raise InputError(f"flag {key} must be true, false or unknown")
    if d.value != UNKNOWN and not d.provisional:
        if d.value != v:
            raise InputError(f"declared {key}={v} contradicts exact decision ({d.provenance})")
        return d
    return Decision(v, "declared")


def _check_gamma_discrete(spec: WmuSpec):
    """Reject W, mu that make Gamma_{W,mu} non-discrete (exact data only).

    Gamma is discrete iff no nonzero real relation x (sum x_i w_i = 0) has
    <x, log|mu|> = 0.
    """
    if not (spec.w_exact() and spec.log_exact()):
        return
    rows = _real_rows(spec.w_gens)
    rows.append(tuple(_real(x) for x, _ in spec.mu_log))
    if la.rank(rows) < spec.rank:
        raise InputError("Gamma_{W,mu} is not discrete: some w_k -> 0 has mu(w_k) -> 1")


def _condition_f(spec: WmuSpec) -> tuple:
    """(Decision, witnesses) for condition (F).

    (F) fails iff Re w and Im w, as functionals on Z^r, are both real
    multiples of a = (log|mu(w_i)|).
    """
    a, _ = spec.log_floats()
    if all(x == 0 for x in a):
        return Decision(False, "|mu| = 1 on W, so mu(w) never tends to 0"), []
    rows = _real_rows(spec.w_gens)
    if spec.w_exact() and spec.log_exact():
        rk = la.rank(rows + [tuple(_real(x) for x, _ in spec.mu_log)])
        holds = rk > 1
        d = Decision(holds, "exact: rank of [log|mu|; Re w; Im w]")
    else:
        A = np.vstack([np.array(a, dtype=float)] + [np.array(r, dtype=float) for r in rows])
        A = A / np.linalg.norm(A, axis=1, keepdims=True).clip(1e-300)
        s = np.linalg.svd(A, compute_uv=False)
        holds = bool(len(s) > 1 and s[1] > 1e-9 * s[0])
        d = Decision(holds, "float: numerical rank of [log|mu|; Re w; Im w]", True)
    return d, (f_witnesses(spec) if holds else [])


def f_witnesses(spec: WmuSpec, levels=(2, 4, 6, 8, 10)) -> list:
    """Lattice points n with |w(n)| growing, mu(n) -> 0 and |w mu^3| bounded.

    Pick v orthogonal to a with <v, w> = c != 0 and x0 with <x0, a> = -1, then
    round L x0 + (e^{3L}/|c|) v to the lattice.
    """
    with mpmath.workdps(60):
        if spec.log_exact():
            am = [_mp(_real(x)).real for x, _ in spec.mu_log]
        else:
            am = [mpmath.mpf(x) for x in spec.log_floats()[0]]
        ws = [_mp(w) for w in spec.w_gens]
        aa = sum(x * x for x in am)
        v = None
        for part in (lambda z: z.real, lambda z: z.imag):
            p = [part(w) for w in ws]
            pa = sum(x * y for x, y in zip(p, am))
            cand = [x - pa / aa * y for x, y in zip(p, am)]
            if sum(x * x for x in cand) > mpmath.mpf(10) ** -20:
                v = cand
                break
        if v is None:
            return []
        c = sum(x * w for x, w in zip(v, ws))
        x0 = [-x / aa for x in am]
        out = []
        for L in levels:
            t = mpmath.exp(3 * L) / abs(c)
            n = [int(mpmath.nint(L * x + t * y)) for x, y in zip(x0, v)]
            wn = sum(k * w for k, w in zip(n, ws))
            log_mu = sum(k * x for k, x in zip(n, am))
            bmod = abs(wn) * mpmath.exp(3 * log_mu)
            out.append({"n": n, "abs_w": float(abs(wn)), "abs_mu": float(mpmath.exp(log_mu)),
                        "abs_w_mu3": float(bmod)})
    return out


def _mp(x):
    """A scalar at the working mpmath precision; surds are evaluated, not rounded."""
    if isinstance(x, (Surd, int, Fraction)):
        x = Surd.coerce(x)
        q = lambda f: mpmath.mpf(f.numerator) / f.denominator
        r = mpmath.sqrt(x.d)
        return mpmath.mpc(q(x.a) + q(x.c) * r, q(x.b) + q(x.e) * r)
    return mpmath.mpc(complex(x))


def classify_case1(spec: WmuSpec, search_bound: int = 20) -> Case1Result:
    """Walk the six-case diagram for Gamma_{W,mu} and return its Kulkarni set."""
    r = spec.rank
    qrank, q_exact = lt.additive_rank(spec.w_gens)
    if qrank < r:
        raise InputError("w_gens must be Q-linearly independent (a Z-basis of W)")
    _check_gamma_discrete(spec)
    notes = []
    disc = _apply_flag(_decide_w_discrete(spec), spec, "w_discrete")
    K, rat, irr = _rotation_decisions(spec, search_bound)
    rat = _apply_flag(rat, spec, "mu_has_rational_rotation")
    irr = _apply_flag(irr, spec, "mu_has_irrational_rotation")
    fdec, wits = _condition_f(spec)
    decisions = {"w_discrete": disc, "mu_has_rational_rotation": rat,
                 "mu_has_irrational_rotation": irr, "condition_F": fdec}

    def need(*ds):
        missing = [k for k, d in decisions.items() if d in ds and d.value == UNKNOWN]
        if missing:
            raise UnresolvedFlags("undecided: " + ", ".join(sorted(missing))
                                  + "; supply them as flags")

    need(rat)
    if rat.value:
        need(disc)
        case = "C1.1" if disc.value else "C1.2"
        notes.append("rational rotations are kept; no finite-index reduction applied")
    else:
        need(disc, irr)
        if disc.value:
            case = "C1.3" if irr.value else "C1.4"
        else:
            case = "C1.5" if irr.value else "C1.6"
    if case in ("C1.1", "C1.2"):
        cond = "holds" if fdec.value is True else ("fails" if fdec.value is False else UNKNOWN)
    else:
        need(fdec)
        cond = "holds" if fdec.value else "fails"
    if r == 1:
        unit = all(x == 0 for x in spec.log_floats()[0])
        kul = _lines((1, 2)) if unit else _lines((1, 2), (2, 3))
        notes.append("cyclic W: limit set from the single-generator formula")
    elif case == "C1.1":
        kul = _lines((1, 2))
    elif case == "C1.2":
        kul = _lines((1, 2), (2, 3))
    elif case in ("C1.3", "C1.4"):
        kul = _lines((1, 2)) if cond == "holds" else _lines((1,), (2,))
    else:
        kul = _lines((1, 2), (2, 3)) if cond == "holds" else _lines((1,), (2, 3))
    return Case1Result(case, cond, kul, r == 1, decisions, wits, notes)


# diagonal groups Gamma_{alpha, beta}

@dataclass
class DiagonalPairSpec:
    """Gamma_{alpha,beta} = {diag(alpha^n, beta^m, 1)}."""
    alpha: object
    beta: object
    hints: dict = field(default_factory=dict)      # {"alpha"|"beta": "rational"|"irrational"}
    dependence: tuple | None = None

    def __post_init__(self):
        for x in (self.alpha, self.beta):
            if (x.is_zero() if isinstance(x, Surd) else complex(x) == 0):
                raise InputError("alpha and beta must be nonzero")

    def generators(self) -> list:
        if _exact_scalar(self.alpha) and _exact_scalar(self.beta):
            return [ProjMap(la.exact_mat([[self.alpha, 0, 0], [0, 1, 0], [0, 0, 1]])),
                    ProjMap(la.exact_mat([[1, 0, 0], [0, self.beta, 0], [0, 0, 1]]))]
        a, b = complex(self.alpha), complex(self.beta)
        return [ProjMap(np.diag([a, 1, 1])), ProjMap(np.diag([1, b, 1]))]


@dataclass
class DiagonalResult:
    case: str
    kulkarni: LimitSetDescriptor
    dependence: tuple | None
    dependence_status: str
    provisional: list

    def as_dict(self) -> dict:
        return {"case": self.case, "kulkarni": self.kulkarni.describe(),
                "dependence": list(self.dependence) if self.dependence else None,
                "dependence_status": self.dependence_status,
                "provisional": list(self.provisional)}


def _modulus_cmp(x, y) -> int:
    """Sign of |x| - |y|, exact for surds."""
    if isinstance(x, Surd) and isinstance(y, Surd):
        return (x.abs2() - y.abs2()).sign()
    ax, ay = abs(complex(x)), abs(complex(y))
    if abs(ax - ay) <= 1e-12 * max(ax, ay):
        return 0
    return 1 if ax > ay else -1


def _coerce_pair(a, b):
    if _exact_scalar(a) and _exact_scalar(b):
        return Surd.coerce(a), Surd.coerce(b)
    return complex(a), complex(b)


def _power_eq(a, b, n: int, m: int) -> bool:
    if isinstance(a, Surd):
        return a ** n == b ** m
    x, y = complex(a) ** n, complex(b) ** m
    return abs(x - y) <= 1e-9 * max(abs(x), abs(y))


def _normalize_nm(n: int, m: int) -> tuple:
    g = math.gcd(n, m) or 1
    n, m = n // g, m // g
    return (-n, -m) if (n < 0 or (n == 0 and m < 0)) else (n, m)


def _dependence(a, b, spec: DiagonalPairSpec, bound: int) -> tuple:
    """((n, m) or None, status) for alpha^n = beta^m."""
    if spec.dependence is not None:
        n, m = spec.dependence
        if (n, m) == (0, 0) or not _power_eq(a, b, n, m):
            raise InputError(f"declared dependence alpha^{n} = beta^{m} does not hold")
        return (n, m), "declared-verified"
    rel = lt.mult_relations([a, b], bound)
    if rel.basis:
        n, mneg = rel.basis[0]
        m = -mneg
        if isinstance(a, Surd):
            k = lt.torsion_order(a ** n * b ** (-m))
            n, m = n * k, m * k
            status = "exact" if rel.complete else "exact-verified search"
        else:
            for k in range(1, lt.TORSION_EXP + 1):
                if _power_eq(a, b, n * k, m * k):
                    n, m = n * k, m * k
                    break
            status = "float search (provisional)"
        return _normalize_nm(n, m), status
    if rel.complete:
        return None, "exact-independent"
    return None, "assuming-independent"


def _rotation_kind(z, name: str, spec: DiagonalPairSpec, prov: list) -> str:
    h = spec.hints.get(name)
    if h in ("rational", "irrational"):
        return h
    if isinstance(z, Surd):
        return "rational" if lt.torsion_order(z) else "irrational"
    x = (cmath.phase(z) / (2 * math.pi)) % 1.0
    prov.append(f"{name}: continued-fraction probe of the rotation angle")
    return "rational" if probe_rational(x) else "irrational"


def classify_diagonal(spec: DiagonalPairSpec, search_bound: int = 20,
                      strict: bool = False) -> DiagonalResult:
    """Case D1..D5 of Gamma_{alpha,beta} and its Kulkarni limit set."""
    a, b = _coerce_pair(spec.alpha, spec.beta)
    exact = isinstance(a, Surd)
    one = Surd(1) if exact else 1.0
    ca, cb = _modulus_cmp(a, one), _modulus_cmp(b, one)
    prov = []
    if ca == 0 and cb == 0:
        raise NoLoxodromic("|alpha| = |beta| = 1")
    if ca == 0 or cb == 0:
        rot_name, rot = ("alpha", a) if ca == 0 else ("beta", b)
        if _rotation_kind(rot, rot_name, spec, prov) == "rational":
            raise UnsupportedClass(f"{rot_name} is a rational rotation: the group has torsion")
        if rot_name == "beta":
            kul = _lines((1, 2), (2, 3), exact=True)
        else:
            kul = _lines((1, 2), (1, 3), exact=True)
        return DiagonalResult("D5", kul, None, "not-needed", prov)
    if _modulus_cmp(a, b) == 0:
        raise UnsupportedClass("|alpha| = |beta|: outside the five diagonal cases")
    opposite = ca != cb
    dep, status = _dependence(a, b, spec, search_bound)
    if status == "assuming-independent":
        if strict:
            raise UnresolvedDependence(f"no alpha^n = beta^m with |n|,|m| <= {search_bound}")
        prov.append(f"dependence search exhausted at bound {search_bound}; assuming independent")
    if status.startswith("float"):
        prov.append("dependence found in floating point")
    if dep is not None:
        case = "D1" if opposite else "D2"
        kul = _lines((1, 2), (3,), exact=True)
    else:
        case = "D3" if opposite else "D4"
        kul = _lines((1,), (2,), (3,), exact=True)
    return DiagonalResult(case, kul, dep, status, prov)


# four-layer decomposition

def _word_key(P: ProjMap):
    if P.exact:
        return P.matrix
    M = P.float_matrix().ravel()
    k = int(np.argmax(np.abs(M) > 1e-6 * np.abs(M).max()))
    M = M / M[k]
    return tuple(np.round(M.real, 8) + 0.0) + tuple(np.round(M.imag, 8) + 0.0)


def _words(gens, bound: int) -> list:
    """(word, ProjMap) for reduced words of length <= bound, deduplicated."""
    exact = all(g.exact for g in gens)
    letters = [chr(ord("a") + i) for i in range(len(gens))]
    alph = [(c, g) for c, g in zip(letters, gens)] + \
        [(c.upper(), g.inverse()) for c, g in zip(letters, gens)]
    ident = ProjMap(la.identity(3, exact))
    out = [("", ident)]
    seen = {_word_key(ident)}
    frontier = [("", ident)]
    for _ in range(bound):
        nxt = []
        for w, M in frontier:
            for c, g in alph:
                if w and w[-1] == c.swapcase():
                    continue
                P = M @ g
                key = _word_key(P)
                if key in seen:
                    continue
                seen.add(key)
                out.append((w + c, P))
                nxt.append((w + c, P))
        frontier = nxt
    return out


def _ordered_product(gens, exps):
    exact = all(g.exact for g in gens)
    P = ProjMap(la.identity(3, exact))
    for g, e in zip(gens, exps):
        if e:
            P = P @ (g ** int(e))
    return P


def _translation(g):
    M, _, _ = _triangular(g)
    return _div(M[1][2], M[2][2])


def _to_unit(P, tries: int = lt.TORSION_EXP):
    """Least power of P with unit diagonal (kills torsion in the lambdas)."""
    Q = P
    for _ in range(tries):
        l12, l23, _ = lambda_maps(Q)
        if _is_one(l12) and _is_one(l23):
            return Q
        Q = Q @ P
    return None


@dataclass
class LayerReport:
    k: int
    r: int
    m: int
    n: int
    bound_ok: bool
    layers: list
    witnesses: dict
    proven: dict
    notes: list

    def as_dict(self) -> dict:
        return {"core_rank_k": self.k, "r": self.r, "m": self.m, "n": self.n,
                "bound_ok": self.bound_ok, "layers": list(self.layers),
                "witnesses": {k: list(v) for k, v in self.witnesses.items()},
                "proven": dict(self.proven), "notes": list(self.notes)}


def decompose_layers(gens, word_bound: int = 1, search_bound: int = 20) -> LayerReport:
    """Ranks k, r, m, n of the four-layer decomposition.

    n and m come from the lambda value groups of the generators (exact
    relation lattices). r and k are ranks of the translation and Core parts
    of the elements found: enumerated words up to ``word_bound`` plus products
    along the lambda relation lattice. They are lower bounds for the group.
    """
    gens = [g if isinstance(g, ProjMap) else ProjMap(g) for g in gens]
    if not gens:
        raise InputError("need at least one generator")
    for g in gens:
        _triangular(g)
    exact = all(g.exact for g in gens)
    if not exact:
        gens = [g.to_float() for g in gens]
    layers = [layer_of(g) for g in gens]
    lam = [lambda_maps(g) for g in gens]
    l12 = [x[0] for x in lam]
    l23 = [x[1] for x in lam]
    rel23 = lt.mult_relations(l23, search_bound)
    n = rel23.rank
    sub12 = [_lattice_value(l12, e) for e in rel23.basis]
    rel12 = lt.mult_relations(sub12, search_bound) if sub12 else lt.Relations([], 0, True, "empty")
    m = rel12.rank
    ka = [tuple(sum(c * e[i] for c, e in zip(coef, rel23.basis)) for i in range(len(gens)))
          for coef in rel12.basis]

    words = _words(gens, word_bound)
    witnesses = {t: [] for t in LAYERS}
    for w, P in words:
        t = layer_of(P)
        if len(witnesses[t]) < 5 and w:
            witnesses[t].append(w)
    lattice_elems = [g for g in gens if layer_of(g) in LAYERS[:2]]
    for e in ka:
        P = _to_unit(_ordered_product(gens, e))
        if P is not None:
            lattice_elems.append(P)
    a_elems = [P for _, P in words if layer_of(P) in LAYERS[:2]] + lattice_elems
    trans = [_translation(P) for P in a_elems]
    r, r_exact = lt.additive_rank(trans)
    core = [P for P in a_elems if layer_of(P) == LAYERS[0]]
    # products of lattice elements whose translations cancel land in Core
    nz = [(P, _translation(P)) for P in lattice_elems]
    nz = [(P, t) for P, t in nz if not _zero(t)]
    if exact and nz:
        rows = [[c for c in lt.surd_coords(Surd.coerce(t))] for _, t in nz]
        cols = [list(col) for col in zip(*rows)]
        for rel in lt.integer_nullspace(cols, len(nz)):
            P = _ordered_product([p for p, _ in nz], rel)
            if layer_of(P) == LAYERS[0]:
                core.append(P)
    k, k_exact = lt.additive_rank([core_coords(P) for P in core])
    proven = {"n": rel23.complete, "m": rel23.complete and rel12.complete,
              "r": False, "k": False}
    notes = [f"r and k are ranks of elements found with word_bound={word_bound}; "
             "the group's ranks are at least these"]
    if not exact:
        notes.append("float input: ranks from integer-relation detection are provisional")
    return LayerReport(k, r, m, n, k + r + m + n <= 4, layers, witnesses, proven, notes)


def _lattice_value(values, e):
    out = Surd(1) if all(isinstance(v, Surd) for v in values) else 1.0
    for v, k in zip(values, e):
        if k:
            out = out * (v ** int(k))
    return out


# normality validator

@dataclass
class NormalityResult:
    status: str                 # confirmed | refuted | unknown
    details: list

    def as_dict(self) -> dict:
        return {"status": self.status, "details": list(self.details)}


def _in_lattice(vecs, target) -> str:
    """Is ``target`` in the Z-span of ``vecs`` (rational coordinate vectors)?"""
    if lt.frac_rank(vecs) < len(vecs):
        return UNKNOWN
    if lt.frac_rank(vecs + [target]) > len(vecs):
        return "out"
    if not vecs:
        return "in"
    cols = [list(col) for col in zip(*vecs)]
    aug = [row + [t] for row, t in zip(cols, target)]
    R, piv = lt.frac_rref(aug)
    coef = [row[-1] for row in R][:len(vecs)]
    return "in" if all(c.denominator == 1 for c in coef) else "out"


def _coords(values) -> list:
    return [c for v in values for c in lt.surd_coords(Surd.coerce(v))]


def verify_normality(sub_gens, g, word_bound: int = 1) -> NormalityResult:
    """Is <sub_gens> normalized by g? Bounded word search plus lattice refutation."""
    subs = [s if isinstance(s, ProjMap) else ProjMap(s) for s in sub_gens]
    g = g if isinstance(g, ProjMap) else ProjMap(g)
    for h in subs + [g]:
        _triangular(h)
    exact = g.exact and all(s.exact for s in subs)
    if not exact:
        subs, g = [s.to_float() for s in subs], g.to_float()
    words = _words(subs, word_bound) if subs else [("", ProjMap(la.identity(3, exact)))]
    gi = g.inverse()
    details, status = [], "confirmed"
    for i, s in enumerate(subs):
        c = g @ s @ gi
        hit = next((w for w, P in words if P.equals(c)), None)
        if hit is not None:
            details.append({"generator": i, "result": "found", "word": hit})
            continue
        why = _refute(subs, c) if exact else None
        if why:
            details.append({"generator": i, "result": "escapes", "reason": why})
            status = "refuted"
        else:
            details.append({"generator": i, "result": "not found"})
            if status == "confirmed":
                status = UNKNOWN
    return NormalityResult(status, details)


def _refute(subs, c):
    """Reason why c provably lies outside <subs>, or None."""
    tags = [layer_of(s) for s in subs]
    ct = layer_of(c)
    order = {t: i for i, t in enumerate(LAYERS)}
    # Core, A and Ker lambda23 are subgroups; the layers index a filtration
    if order[ct] > max(order[t] for t in tags) and max(order[t] for t in tags) <= 2:
        return f"conjugate lies in {ct}, outside the subgroup's layer"
    lam_s = [lambda_maps(s) for s in subs]
    lam_c = lambda_maps(c)
    for j, name in ((0, "lambda12"), (1, "lambda23")):
        vals = [l[j] for l in lam_s]
        if all(lt._is_gaussian(v) for v in vals + [lam_c[j]]):
            keys = sorted(set().union(*(lt.gaussian_valuations(v) for v in vals + [lam_c[j]])))
            vecs = [[lt.gaussian_valuations(v).get(k, 0) for k in keys] for v in vals]
            vecs = [v for v in vecs if any(v)]
            tgt = [lt.gaussian_valuations(lam_c[j]).get(k, 0) for k in keys]
            if _in_lattice(vecs, tgt) == "out":
                return f"{name} value escapes the value group"
    if all(t == LAYERS[0] for t in tags) and ct == LAYERS[0]:
        vecs = [_coords(core_coords(s)) for s in subs]
        if _in_lattice(vecs, _coords(core_coords(c))) == "out":
            return "Core coordinates escape the lattice of the subgroup"
    if all(t in LAYERS[:2] for t in tags) and ct in LAYERS[:2]:
        vecs = [_coords([_translation(s)]) for s in subs]
        vecs = [v for v in vecs if any(v)]
        if _in_lattice(vecs, _coords([_translation(c)])) == "out":
            return "translation part escapes the lattice of the subgroup"
    return None
