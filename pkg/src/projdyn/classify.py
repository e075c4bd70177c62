"""Eigenstructure and the conjugacy taxonomy of PSL(3, C)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from . import linalg as la
from .errors import (IdentityElement, InputError, RegionsOverlap,
                     UnsupportedClass, UnsupportedExactCubic)
from .proj import (ProjMap, ProjPoint, fs_distance, span)
from .scalars import TAU, Surd

# a set of eigenvalues counts as repeated when |spread| * sigma_min(eigvecs)
# is below this multiple of tau * ||A||, i.e. A is that close to a matrix
# with a repeated eigenvalue
CLUSTER_FACTOR = 100.0
# singular values of A - lambda I below this fraction of ||A|| are null
NULL_REL = 1e-6
MODULUS_REL = 1e-6
CF_QMAX = 10**6

MAJORS = ("Elliptic", "Parabolic", "Loxodromic")
MINORS = ("Regular", "ComplexReflection", "Unipotent", "ElliptoParabolicRational",
          "ElliptoParabolicIrrational", "LoxoParabolic", "ScrewRational",
          "ScrewIrrational", "ComplexHomothety", "StronglyLoxodromic")
MAJOR_OF = {
    "Regular": "Elliptic", "ComplexReflection": "Elliptic",
    "Unipotent": "Parabolic", "ElliptoParabolicRational": "Parabolic",
    "ElliptoParabolicIrrational": "Parabolic", "LoxoParabolic": "Loxodromic",
    "ScrewRational": "Loxodromic", "ScrewIrrational": "Loxodromic",
    "ComplexHomothety": "Loxodromic", "StronglyLoxodromic": "Loxodromic",
}


@dataclass(frozen=True)
class RationalityHint:
    """Declared rationality of a rotation angle x (as in e^{2 pi i x})."""
    kind: str = "unknown"      # rational | irrational | unknown
    p: int = 0
    q: int = 1

    def __post_init__(self):
        if self.kind not in ("rational", "irrational", "unknown"):
            raise InputError(f"bad hint kind {self.kind}")
        if self.kind == "rational":
            if self.q <= 0 or math.gcd(self.p, self.q) != 1:
                raise InputError("rational hint must be p/q in lowest terms, q > 0")

    @classmethod
    def rational(cls, x) -> "RationalityHint":
        x = Fraction(x)
        return cls("rational", x.numerator, x.denominator)


@dataclass
class EigenData:
    """Distinct eigenvalues with multiplicities and eigenvectors.

    Float mode reports eigenvalues of the determinant-one lift. Exact mode
    reports them for the stored lift, whose determinant is ``det``.
    """
    values: list
    alg_mults: list
    geom_mults: list
    vectors: list            # per distinct eigenvalue, a basis of its eigenspace
    diagonalizable: bool
    exact: bool
    det: object = 1

    def flat(self) -> list:
        out = []
        for v, m in zip(self.values, self.alg_mults):
            out += [v] * m
        return out


@dataclass
class ElementClass:
    major: str
    minor: str
    provisional: list = field(default_factory=list)
    angle: object = None       # rotation parameter x for the rationality test

    def as_dict(self) -> dict:
        return {"major": self.major, "minor": self.minor,
                "provisional_flags": list(self.provisional)}


# cubic roots

def char_coeffs(A):
    A = np.asarray(A, dtype=complex)
    tr = np.trace(A)
    c2 = (A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0] + A[0, 0] * A[2, 2]
          - A[0, 2] * A[2, 0] + A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1])
    return np.array([1.0, -tr, c2, -np.linalg.det(A)], dtype=complex)


def cubic_roots(c) -> np.ndarray:
    """Roots of a monic cubic by Cardano; residual picks the branch, then one Newton step."""
    _, a2, a1, a0 = c
    p = a1 - a2 * a2 / 3
    q = 2 * a2 ** 3 / 27 - a2 * a1 / 3 + a0
    s = np.sqrt((q / 2) ** 2 + (p / 3) ** 3 + 0j)
    om = np.exp(2j * np.pi / 3)
    best = None
    for w in (-q / 2 + s, -q / 2 - s):
        if w == 0:
            t = np.zeros(3, dtype=complex)
        else:
            u = w ** (1 / 3)
            t = np.array([u * om ** k - p / (3 * u * om ** k) for k in range(3)])
        r = t - a2 / 3
        res = float(np.abs(np.polyval(c, r)).sum())
        if best is None or res < best[0]:
            best = (res, r)
    dc = np.polyder(c)
    out = []
    for x in best[1]:
        d = np.polyval(dc, x)
        if d != 0:
            y = x - np.polyval(c, x) / d
            if abs(np.polyval(c, y)) < abs(np.polyval(c, x)):
                x = y
        out.append(x)
    return np.array(out)


def _null_vec(A, lam):
    _, _, vh = np.linalg.svd(A - lam * np.eye(len(A)))
    return vh[-1].conj()


def _cluster_score(A, roots, idx, scale):
    V = np.array([_null_vec(A, roots[i]) for i in idx]).T
    smin = np.linalg.svd(V, compute_uv=False)[-1]
    spread = max(abs(roots[i] - roots[j]) for i in idx for j in idx)
    return spread * smin / scale


def _float_eigen(A) -> EigenData:
    A = np.asarray(A, dtype=complex)
    A = A / np.linalg.det(A) ** (1 / 3)
    scale = np.linalg.norm(A, 2)
    r = cubic_roots(char_coeffs(A))
    thr = CLUSTER_FACTOR * TAU
    pairs = [(0, 1), (0, 2), (1, 2)]
    scores = {p: _cluster_score(A, r, p, scale) for p in pairs}
    tr = np.trace(A)
    if all(s <= thr for s in scores.values()):
        groups = [((0, 1, 2), tr / 3)]
    else:
        best = min(pairs, key=lambda p: scores[p])
        if scores[best] <= thr:
            k = ({0, 1, 2} - set(best)).pop()
            groups = [(best, (tr - r[k]) / 2), ((k,), r[k])]
        else:
            groups = [((i,), r[i]) for i in range(3)]
    values, alg, geom, vecs = [], [], [], []
    for idx, lam in groups:
        u, s, vh = np.linalg.svd(A - lam * np.eye(3))
        # judge null directions against the eigenvalue's own size, so a Jordan
        # block of a small eigenvalue is not lost next to a large one
        g = max(1, int(np.sum(s <= NULL_REL * max(abs(lam), NULL_REL * scale))))
        g = min(g, len(idx))
        values.append(complex(lam))
        alg.append(len(idx))
        geom.append(g)
        vecs.append([vh[-1 - t].conj() for t in range(g)])
    return EigenData(values, alg, geom, vecs, sum(geom) == 3, False, 1)


# exact eigenvalues

def _snap(x: float, d: int):
    """Return Fraction pair (a, c) with x ~ a + c sqrt d, or None."""
    with mpmath.workdps(40):
        if abs(x) < 1e-13:
            return Fraction(0), Fraction(0)
        for basis in ([x, 1], [x, 1, mpmath.sqrt(d)] if d else None):
            if basis is None:
                continue
            rel = mpmath.pslq(basis, maxcoeff=10**6, maxsteps=10**5, tol=1e-11)
            if rel and rel[0] != 0:
                a = Fraction(-rel[1], rel[0])
                c = Fraction(-rel[2], rel[0]) if len(rel) > 2 else Fraction(0)
                return a, c
    return None


def _poly_eval(coeffs, x):
    out = Surd(0)
    for c in coeffs:
        out = out * x + c
    return out


def _exact_charpoly(M):
    A = M
    tr = A[0][0] + A[1][1] + A[2][2]
    c2 = (A[0][0] * A[1][1] - A[0][1] * A[1][0] + A[0][0] * A[2][2]
          - A[0][2] * A[2][0] + A[1][1] * A[2][2] - A[1][2] * A[2][1])
    return [Surd(1), -tr, c2, -la.det(A)]


def _field_d(M) -> int:
    return next((x.d for r in M for x in r if x.d), 0)


def exact_roots(M) -> list:
    """Eigenvalues of an exact 3x3 matrix inside Q(i, sqrt d)."""
    M = la.exact_mat(M)
    if all(M[i][j].is_zero() for i in range(3) for j in range(3) if i > j) or \
            all(M[i][j].is_zero() for i in range(3) for j in range(3) if i < j):
        return [M[0][0], M[1][1], M[2][2]]
    d = _field_d(M)
    cp = _exact_charpoly(M)
    fl = np.array([complex(c) for c in cp])
    roots = []
    poly = cp
    for z in np.roots(fl):
        if len(roots) == 3:
            break
        re, im = _snap(z.real, d), _snap(z.imag, d)
        if re is None or im is None:
            continue
        cand = Surd(re[0], im[0], re[1], im[1], d)
        if _poly_eval(cp, cand).is_zero():
            # multiplicity by repeated exact division
            q = poly
            while len(q) > 1 and _poly_eval(q, cand).is_zero():
                roots.append(cand)
                q = _synth_div(q, cand)
            poly = q
    if len(roots) != 3:
        raise UnsupportedExactCubic("characteristic polynomial does not split in the declared field")
    return roots


def _synth_div(coeffs, r):
    out = [coeffs[0]]
    for c in coeffs[1:-1]:
        out.append(c + out[-1] * r)
    return out


def _exact_eigen(M) -> EigenData:
    M = la.exact_mat(M)
    roots = exact_roots(M)
    values, alg = [], []
    for r in roots:
        for i, v in enumerate(values):
            if v == r:
                alg[i] += 1
                break
        else:
            values.append(r)
            alg.append(1)
    geom, vecs = [], []
    for v in values:
        B = tuple(tuple(M[i][j] - (v if i == j else 0) for j in range(3)) for i in range(3))
        ns = la.nullspace(B)
        geom.append(len(ns))
        vecs.append(ns)
    return EigenData(values, alg, geom, vecs, sum(geom) == 3, True, la.det(M))


def eigen3(g) -> EigenData:
    M = g.matrix if isinstance(g, ProjMap) else g
    if len(M) != 3:
        raise InputError("eigen3 expects a 3x3 matrix")
    if la.is_exact(M):
        return _exact_eigen(M)
    return _float_eigen(M)


# rationality

def probe_rational(x: float, qmax: int = CF_QMAX):
    """Continued-fraction probe: (p, q) if x looks like p/q, else None."""
    x = x % 1.0
    for frac in _convergents(x, qmax):
        err = abs(x - frac.numerator / frac.denominator)
        err = min(err, abs(x - 1 - frac.numerator / frac.denominator))
        if err <= 1e-11 and frac.denominator ** 2 * err <= 1e-3:
            return frac.numerator % frac.denominator, frac.denominator
    return None


def _convergents(x: float, qmax: int):
    h0, h1, k0, k1 = 0, 1, 1, 0
    y = x
    for _ in range(64):
        a = math.floor(y)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > qmax:
            return
        yield Fraction(h1, k1)
        frac = y - a
        if frac < 1e-15:
            return
        y = 1 / frac


def _exact_root_of_unity(z: Surd):
    """Order k if z is a root of unity, else None (orders above 12 cannot occur in a quartic field)."""
    w = Surd(1)
    for k in range(1, 13):
        w = w * z
        if w == 1:
            return k
    return None


def _rotation_tag(ratio, hint: RationalityHint, provisional: list, label: str) -> str:
    if hint.kind != "unknown":
        return hint.kind
    if isinstance(ratio, Surd):
        return "rational" if _exact_root_of_unity(ratio) else "irrational"
    x = (np.angle(ratio) / (2 * np.pi)) % 1.0
    provisional.append(f"{label}: continued-fraction probe (q <= {CF_QMAX})")
    return "rational" if probe_rational(x) else "irrational"


def _abs2(x):
    return x.abs2() if isinstance(x, Surd) else abs(x) ** 2


def _mod_eq(x, y) -> bool:
    if isinstance(x, Surd) and isinstance(y, Surd):
        return x.abs2() == y.abs2()
    return abs(abs(complex(x)) - abs(complex(y))) <= MODULUS_REL * max(abs(complex(x)), abs(complex(y)))


def classify_element(g, hint: RationalityHint | None = None) -> ElementClass:
    """Place g in the taxonomy of PSL(3, C)."""
    hint = hint or RationalityHint()
    ed = eigen3(g)
    if len(ed.values) == 1 and ed.diagonalizable:
        raise IdentityElement("scalar matrices are the identity of PSL(3,C)")
    vals = ed.flat()
    unimod = _mod_eq(vals[0], vals[1]) and _mod_eq(vals[1], vals[2])
    prov: list = []
    if unimod:
        if ed.diagonalizable:
            minor = "Regular" if len(ed.values) == 3 else "ComplexReflection"
            return ElementClass("Elliptic", minor, prov)
        if len(ed.values) == 1:
            return ElementClass("Parabolic", "Unipotent", prov)
        dbl = ed.values[ed.alg_mults.index(2)]
        sim = ed.values[ed.alg_mults.index(1)]
        # theta is rational iff lambda / mu (= e^{6 pi i theta}) is a root of unity
        ratio = dbl / sim
        tag = _rotation_tag(ratio, hint, prov, "ellipto-parabolic angle")
        minor = "ElliptoParabolicRational" if tag == "rational" else "ElliptoParabolicIrrational"
        return ElementClass("Parabolic", minor, prov, angle=ratio)
    if not ed.diagonalizable:
        return ElementClass("Loxodromic", "LoxoParabolic", prov)
    if len(ed.values) == 2:
        return ElementClass("Loxodromic", "ComplexHomothety", prov)
    pairs = [(i, j) for i in range(3) for j in range(i + 1, 3) if _mod_eq(vals[i], vals[j])]
    if len(pairs) == 1:
        i, j = pairs[0]
        l1, l2 = sorted((vals[i], vals[j]), key=lambda z: np.angle(complex(z)) % (2 * np.pi))
        ratio = l1 / l2
        tag = _rotation_tag(ratio, hint, prov, "screw ratio")
        minor = "ScrewRational" if tag == "rational" else "ScrewIrrational"
        return ElementClass("Loxodromic", minor, prov, angle=ratio)
    return ElementClass("Loxodromic", "StronglyLoxodromic", prov)


# cyclic groups

def _generalized_vector(A, lam, v_eig):
    """A vector of ker (A - lam)^2 independent of the eigenvector."""
    if la.is_exact(A):
        B = tuple(tuple(A[i][j] - (lam if i == j else 0) for j in range(3)) for i in range(3))
        ns = la.nullspace(la.matmul(B, B))
        for v in ns:
            if la.rank([v_eig, v]) == 2:
                return v
        raise InputError("no generalized eigenvector")
    A = np.asarray(A, dtype=complex)
    A = A / np.linalg.det(A) ** (1 / 3)
    B = A - lam * np.eye(3)
    _, s, vh = np.linalg.svd(B @ B)
    cands = [vh[-1].conj(), vh[-2].conj()]
    v = v_eig / np.linalg.norm(v_eig)
    return max(cands, key=lambda c: np.linalg.norm(c - v * np.vdot(v, c)))


def cyclic_kulkarni(g):
    """Kulkarni limit set of the cyclic group generated by g."""
    from .limits import LimitSetDescriptor
    g = g if isinstance(g, ProjMap) else ProjMap(g)
    cls = classify_element(g)
    ed = eigen3(g)
    M = g.matrix
    if cls.minor == "LoxoParabolic":
        i2 = ed.alg_mults.index(2)
        i1 = ed.alg_mults.index(1)
        v1 = ed.vectors[i1][0]
        v2 = ed.vectors[i2][0]
        v3 = _generalized_vector(M, ed.values[i2], v2)
        comps = [span(v1, v2), span(v2, v3)]
    elif cls.minor.startswith("ElliptoParabolic") or (cls.minor == "Unipotent" and sum(ed.geom_mults) == 2):
        vecs = [v for vs in ed.vectors for v in vs]
        comps = [span(*vecs)]
    elif cls.minor == "ComplexHomothety":
        i2 = ed.alg_mults.index(2)
        i1 = ed.alg_mults.index(1)
        comps = [ProjPoint(ed.vectors[i1][0]), span(*ed.vectors[i2])]
    else:
        raise UnsupportedClass(f"no cyclic formula for {cls.minor}")
    return LimitSetDescriptor(comps)


def dominant_vector(g, tol: float = MODULUS_REL):
    """Eigenvector of the unique eigenvalue of largest modulus, if any."""
    g = g if isinstance(g, ProjMap) else ProjMap(g)
    ed = eigen3(g)
    mods = [math.sqrt(float(_abs2(v))) if isinstance(v, Surd) else abs(v) for v in ed.values]
    k = int(np.argmax(mods))
    if ed.alg_mults[k] != 1:
        return None
    others = [m for i, m in enumerate(mods) if i != k]
    if others and max(others) >= mods[k] * (1 - tol):
        return None
    return ProjPoint(ed.vectors[k][0])


# ping-pong

@dataclass(frozen=True)
class Ball:
    """Closed Fubini-Study ball."""
    center: object
    radius: float

    def sample(self, k: int, rng) -> np.ndarray:
        c = la.float_vec(self.center.lift if isinstance(self.center, ProjPoint) else self.center)
        c = c / np.linalg.norm(c)
        out = []
        for _ in range(k):
            u = rng.normal(size=len(c)) + 1j * rng.normal(size=len(c))
            u = u - c * np.vdot(c, u)
            u = u / np.linalg.norm(u)
            t = self.radius * rng.uniform() ** (1 / (2 * len(c) - 2))
            out.append(np.cos(t) * c + np.sin(t) * u)
        # boundary points too
        for _ in range(k // 4 + 1):
            u = rng.normal(size=len(c)) + 1j * rng.normal(size=len(c))
            u = u - c * np.vdot(c, u)
            u = u / np.linalg.norm(u)
            out.append(np.cos(self.radius) * c + np.sin(self.radius) * u)
        return np.array(out)

    def contains(self, v, slack: float = 1e-12) -> bool:
        c = self.center.lift if isinstance(self.center, ProjPoint) else self.center
        return fs_distance(c, v) <= self.radius + slack


def verify_ping_pong(gens, regions, samples: int = 200, seed: int = 0) -> bool:
    """Sampling certificate for ping-pong: a(A_b) inside A_a for b != a^{-1}."""
    gens = [g if isinstance(g, ProjMap) else ProjMap(g) for g in gens]
    if len(gens) != len(regions):
        raise InputError("one region per generator")
    for i in range(len(regions)):
        for j in range(i + 1, len(regions)):
            a, b = regions[i], regions[j]
            ca = a.center.lift if isinstance(a.center, ProjPoint) else a.center
            cb = b.center.lift if isinstance(b.center, ProjPoint) else b.center
            if fs_distance(ca, cb) <= a.radius + b.radius:
                raise RegionsOverlap(f"regions {i} and {j} intersect")
    inv_index = []
    for g in gens:
        gi = g.inverse()
        k = next((t for t, h in enumerate(gens) if h.equals(gi, 1e-8)), None)
        if k is None:
            raise InputError("generator set is not symmetric")
        inv_index.append(k)
    rng = np.random.default_rng(seed)
    pts = [r.sample(samples, rng) for r in regions]
    for a, g in enumerate(gens):
        G = g.float_matrix()
        for b in range(len(gens)):
            if b == inv_index[a]:
                continue
            for v in pts[b]:
                if not regions[a].contains(G @ v, 1e-9):
                    return False
    return True
