"""Orbit counting for Fuchsian groups acting on the Poincare disk.

Curvature is -1: the area element is 4/(1-|z|^2)^2, so a ball of radius r
has area 4 pi sinh(r/2)^2 and an ideal octagon has area 6 pi.

Generators are SU(1,1) matrices [[a, b], [conj b, conj a]], stored as the
pair (a, b).  Words use lowercase letters for generators and uppercase for
inverses.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import InputError, OutsideDisk, TooFewRows, TooFewSamples

OCTAGON_VOLUME = 6 * math.pi
TAU = 1e-9
MIN_ROWS = 32


# disk geometry

def _disk_point(z) -> complex:
    z = complex(z)
    if not abs(z) < 1:
        raise OutsideDisk(f"|z| = {abs(z)!r} is not < 1")
    return z


def poincare_distance(z, w) -> float:
    """rho(z, w) = 2 artanh |z - w| / |1 - conj(z) w|."""
    z, w = _disk_point(z), _disk_point(w)
    num = abs(z - w)
    if num == 0:
        return 0.0
    # 1 - t^2 = (1-|z|^2)(1-|w|^2)/|1-conj(z)w|^2 avoids cancellation near 1
    den = abs(1 - z.conjugate() * w)
    t = num / den
    one_minus = (1 - abs(z) ** 2) * (1 - abs(w) ** 2) / den ** 2
    return math.log((1 + t) ** 2 / one_minus)


def ball_volume(r: float) -> float:
    """Area of a hyperbolic disk of radius r."""
    return 4 * math.pi * math.sinh(r / 2) ** 2


def translation(w) -> tuple:
    """(a, b) of the isometry 0 -> w that fixes the diameter through w."""
    w = _disk_point(w)
    s = 1 / math.sqrt(1 - abs(w) ** 2)
    return complex(s), w * s


def _mul(a1, b1, a2, b2):
    return a1 * a2 + b1 * np.conj(b2), a1 * b2 + b1 * np.conj(a2)


def _act(a, b, z):
    return (a * z + b) / (np.conj(b) * z + np.conj(a))


def _rho0(a, b):
    """rho(0, g 0) for g = (a, b); |a| + |b| = e^(rho/2)."""
    return 2 * np.log(np.abs(a) + np.abs(b))


def _dist_to_halfplane(alpha, beta, c, r):
    """Distance from y = M(0), M = (alpha, beta), to the disk |x - c| <= r.

    The disk is orthogonal to the unit circle.  With y = beta / conj(alpha),
    sinh d = (|y - c|^2 - r^2) / (r (1 - |y|^2)), which in matrix terms is
    (|alpha|^2 + |beta|^2 - 2 Re(conj(alpha beta) c)) / r; no cancellation
    near the unit circle.
    """
    q = np.abs(alpha) ** 2 + np.abs(beta) ** 2 - 2 * np.real(np.conj(alpha * beta) * c)
    return np.where(q <= 0, 0.0, np.arcsinh(np.maximum(q, 0) / r))


def geodesic_distance(c1, r1, c2, r2) -> float:
    """Distance between disjoint geodesics given as circles orthogonal to the unit circle."""
    # inversive distance of orthogonal circles is cosh of the hyperbolic distance
    inv = (abs(c1 - c2) ** 2 - r1 * r1 - r2 * r2) / (2 * r1 * r2)
    return math.acosh(inv) if inv >= 1 else 0.0


# Fuchsian specs

@dataclass(frozen=True)
class FuchsianSpec:
    """Disk isometries (a, b) with |a|^2 - |b|^2 = 1."""
    generators: tuple
    free_rank_claim: int | None = None
    name: str = ""

    def __post_init__(self):
        gens = []
        for g in self.generators:
            a, b = _as_su11(g)
            gens.append((a, b))
        if not gens:
            raise InputError("no generators")
        object.__setattr__(self, "generators", tuple(gens))

    @property
    def rank(self) -> int:
        return len(self.generators)

    def letters(self) -> list:
        """Symmetric generating set as (letter, a, b)."""
        out = []
        for i, (a, b) in enumerate(self.generators):
            out.append((chr(97 + i), a, b))
            out.append((chr(65 + i), a.conjugate(), -b))
        return out

    def matrix(self, word: str) -> tuple:
        a, b = 1 + 0j, 0j
        table = {s: (x, y) for s, x, y in self.letters()}
        for s in word:
            x, y = table[s]
            a, b = _mul(a, b, x, y)
        return complex(a), complex(b)

    def apply(self, word: str, z) -> complex:
        a, b = self.matrix(word)
        return complex(_act(a, b, complex(z)))

    def isometric_disks(self) -> dict:
        """letter s -> (center, radius) of the disk s maps the exterior of I(s) onto."""
        out = {}
        for s, a, b in self.letters():
            if abs(b) <= TAU:
                return {}
            out[s] = (a / b.conjugate(), 1 / abs(b))
        return out

    def schottky_certificate(self) -> dict | None:
        """Disks with pairwise disjoint interiors certify a free ping-pong group.

        Returns the disks and the smallest distance between their boundary
        geodesics, or None when the disks overlap.
        """
        disks = self.isometric_disks()
        if not disks:
            return None
        keys = sorted(disks)
        gap = math.inf
        for i, s in enumerate(keys):
            for t in keys[i + 1:]:
                (c1, r1), (c2, r2) = disks[s], disks[t]
                if abs(c1 - c2) < (r1 + r2) * (1 - 1e-12):
                    return None
                gap = min(gap, geodesic_distance(c1, r1, c2, r2))
        return {"disks": disks, "gap": gap}

    def in_fundamental_domain(self, z) -> bool:
        z = complex(z)
        return all(abs(z - c) >= r for c, r in self.isometric_disks().values())

    def reduce(self, z, max_steps: int = 100000) -> tuple:
        """Write z = g(y) with y in the Ford domain; returns (word of g, y)."""
        disks = self.isometric_disks()
        table = {s: (x, y) for s, x, y in self.letters()}
        z = complex(z)
        word = []
        for _ in range(max_steps):
            hit = None
            for s, (c, r) in disks.items():
                if abs(z - c) < r:
                    hit = s
                    break
            if hit is None:
                return _reduce_word("".join(word)), z
            a, b = table[hit]
            z = complex(_act(a.conjugate(), -b, z))
            word.append(hit)
        raise InputError("reduction did not terminate")

    def as_dict(self) -> dict:
        return {"name": self.name, "free_rank_claim": self.free_rank_claim,
                "generators": [{"a": [a.real, a.imag], "b": [b.real, b.imag]}
                               for a, b in self.generators]}

    @classmethod
    def from_dict(cls, d: dict) -> "FuchsianSpec":
        allowed = {"name", "free_rank_claim", "generators", "schema", "kind"}
        extra = set(d) - allowed
        if extra:
            raise InputError(f"unknown fields {sorted(extra)}")
        gens = []
        for g in d["generators"]:
            if isinstance(g, dict):
                gens.append((complex(*g["a"]), complex(*g["b"])))
            else:
                M = [[complex(*e) if isinstance(e, list) else complex(e) for e in row] for row in g]
                gens.append(M)
        return cls(tuple(gens), d.get("free_rank_claim"), d.get("name", ""))


def _as_su11(g) -> tuple:
    if isinstance(g, tuple) and len(g) == 2 and not hasattr(g[0], "__len__"):
        a, b = complex(g[0]), complex(g[1])
    else:
        M = np.asarray(g, dtype=complex)
        if M.shape != (2, 2):
            raise InputError("generator must be 2x2")
        det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
        if abs(det - 1) > 1e-9:
            raise InputError("generator must have determinant 1")
        sign = 1 if abs(M[1, 1] - M[0, 0].conjugate()) <= 1e-9 * (1 + abs(M[0, 0])) else -1
        a, b = sign * M[0, 0], sign * M[0, 1]
        c, d = sign * M[1, 0], sign * M[1, 1]
        tol = 1e-9 * (1 + abs(a))
        if abs(d - a.conjugate()) > tol or abs(c - b.conjugate()) > tol:
            raise InputError("generator does not preserve the unit disk")
    if abs(abs(a) ** 2 - abs(b) ** 2 - 1) > 1e-9 * (1 + abs(a) ** 2):
        raise InputError("generator does not preserve the unit disk")
    return a, b


def _reduce_word(word: str) -> str:
    out = []
    for s in word:
        if out and out[-1] == s.swapcase():
            out.pop()
        else:
            out.append(s)
    return "".join(out)


def hyperbolic_generator(length: float, angle: float = 0.0) -> tuple:
    """Translation of length `length` along the diameter at `angle`."""
    return complex(math.cosh(length / 2)), math.sinh(length / 2) * complex(math.cos(angle), math.sin(angle))


def cyclic_spec(length: float, angle: float = 0.0) -> FuchsianSpec:
    return FuchsianSpec((hyperbolic_generator(length, angle),), 1, "cyclic")


def octagon_spec() -> FuchsianSpec:
    """Parabolic side pairings of the regular ideal octagon (five-punctured sphere).

    Side k has ideal endpoints at angles (2k-1)pi/8, (2k+1)pi/8; generator j
    pairs side 2j with side 2j+1, fixing their common ideal vertex.
    """
    gens = []
    c0 = 1 / math.cos(math.pi / 8)
    r0 = math.tan(math.pi / 8)
    for j in range(4):
        t0, t1 = 2 * j * math.pi / 4, (2 * j + 1) * math.pi / 4
        # rotate side t0 onto side t1 by the Euclidean reflection in the bisector,
        # then reflect in side t1; the composite is orientation preserving
        mid = (t0 + t1) / 2
        c1 = c0 * complex(math.cos(t1), math.sin(t1))
        # reflection in bisector: z -> e^{2i mid} conj z
        # inversion in side t1: z -> c1 + r0^2 / conj(z - c1)
        # composite z -> c1 + r0^2 / (e^{-2i mid} z - conj c1)
        u = complex(math.cos(2 * mid), -math.sin(2 * mid))
        M = np.array([[c1 * u, r0 ** 2 - abs(c1) ** 2], [u, -c1.conjugate()]], dtype=complex)
        M = M / np.sqrt(np.linalg.det(M))
        gens.append(M)
    return FuchsianSpec(tuple(gens), 4, "ideal-octagon")


def reference_spec() -> FuchsianSpec:
    """Shipped rank-4 Schottky group (data/schottky4.json)."""
    text = resources.files("projdyn").joinpath("data/schottky4.json").read_text()
    return FuchsianSpec.from_dict(json.loads(text))


def ford_domain_area(spec: FuchsianSpec) -> float:
    """Gauss-Bonnet area of the Ford domain: (sides - 2) pi when all vertices are ideal."""
    cert = spec.schottky_certificate()
    if cert is None:
        raise InputError("isometric disks overlap")
    disks = list(cert["disks"].values())
    tangent = 0
    for i, (c1, r1) in enumerate(disks):
        for c2, r2 in disks[i + 1:]:
            if abs(abs(c1 - c2) - (r1 + r2)) <= 1e-9 * (r1 + r2):
                tangent += 1
    # every side must meet its two neighbours at the ideal boundary
    return (len(disks) - 2) * math.pi if tangent == len(disks) else math.inf


# orbit tables

@dataclass
class OrbitTable:
    """Rows (word, gamma w, rho(z, gamma w)) sorted by (distance, word)."""
    z: complex
    w: complex
    words: list
    points: np.ndarray
    distances: np.ndarray
    word_bound: int
    radius: float | None = None
    horizon: float = math.inf
    certified: bool = False
    frontier: np.ndarray = field(default_factory=lambda: np.zeros(0))
    gap: float = 0.0
    rank: int = 0
    dropped: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __len__(self):
        return len(self.words)

    @property
    def rows(self) -> list:
        return list(zip(self.words, self.points.tolist(), self.distances.tolist()))

    def below_horizon(self) -> np.ndarray:
        return self.distances[self.distances < self.horizon]

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["word", "re", "im", "distance"])
        for word, p, d in zip(self.words, self.points, self.distances):
            wr.writerow([word or "1", repr(float(p.real)), repr(float(p.imag)), repr(float(d))])
        return buf.getvalue()

    def as_dict(self) -> dict:
        return {"z": [self.z.real, self.z.imag], "w": [self.w.real, self.w.imag],
                "word_bound": self.word_bound, "radius": self.radius,
                "horizon": None if math.isinf(self.horizon) else self.horizon,
                "certified": self.certified, "rows": len(self)}


def orbit_enumerate(spec: FuchsianSpec, z, w, word_bound: int, radius: float | None = None) -> OrbitTable:
    """All reduced words up to word_bound applied to w, measured from z.

    With a ping-pong certificate and w in the Ford domain, every descendant of
    a word g s lies in g(D_s); its distance from z bounds the whole subtree.
    That bound prunes subtrees beyond `radius` and fixes the horizon below
    which the table is complete.
    """
    if word_bound < 0:
        raise InputError("word_bound must be >= 0")
    z, w = _disk_point(z), _disk_point(w)
    letters = spec.letters()
    k = len(letters)
    cert = spec.schottky_certificate()
    certified = cert is not None and spec.in_fundamental_domain(w)
    if radius is not None and not certified:
        raise InputError("radius pruning needs a ping-pong certificate and w in the Ford domain")
    la = np.array([x for _, x, _ in letters])
    lb = np.array([y for _, _, y in letters])
    inv = np.array([i ^ 1 for i in range(k)])
    if certified:
        dc = np.array([cert["disks"][s][0] for s, _, _ in letters])
        dr = np.array([cert["disks"][s][1] for s, _, _ in letters])
    Tw = translation(w)
    Tz = translation(z)
    Tzi = (Tz[0].conjugate(), -Tz[1])

    # level arrays: parent row index, last letter, matrix of gamma
    parents, lasts, A, B = [np.array([-1])], [np.array([-1])], [np.array([1 + 0j])], [np.array([0j])]
    frontier = []
    level_a, level_b, level_last = A[0], B[0], lasts[0]
    offset, level_start = 1, 0
    for depth in range(1, word_bound + 2):
        n = len(level_a)
        if n == 0:
            break
        idx = np.repeat(np.arange(n), k)
        let = np.tile(np.arange(k), n)
        keep = (level_last[idx] < 0) | (let != inv[np.maximum(level_last[idx], 0)])
        idx, let = idx[keep], let[keep]
        pa, pb = level_a[idx], level_b[idx]
        if certified:
            # parent^{-1} Tz sends 0 to parent^{-1} z; distance to the next letter's disk
            ya, yb = _mul(np.conj(pa), -pb, Tz[0], Tz[1])
            bound = _dist_to_halfplane(ya, yb, dc[let], dr[let])
            bound = bound * (1 - 1e-9) - 1e-12
        if depth == word_bound + 1:
            if certified:
                frontier.append(bound)
            break
        if radius is not None:
            cut = bound >= radius
            frontier.append(bound[cut])
            idx, let, pa, pb = idx[~cut], let[~cut], pa[~cut], pb[~cut]
        na, nb = _mul(pa, pb, la[let], lb[let])
        parents.append(idx + level_start)
        lasts.append(let)
        A.append(na)
        B.append(nb)
        level_start = offset
        offset += len(na)
        level_a, level_b, level_last = na, nb, let

    par = np.concatenate(parents)
    last = np.concatenate(lasts)
    ga = np.concatenate(A)
    gb = np.concatenate(B)
    # rho(z, gamma w) = rho(0, Tz^{-1} gamma Tw 0)
    ma, mb = _mul(Tzi[0], Tzi[1], *_mul(ga, gb, Tw[0], Tw[1]))
    dist = _rho0(ma, mb)
    pts = _act(ga, gb, w)
    if radius is not None:
        mask = dist < radius
    else:
        mask = np.ones(len(dist), dtype=bool)
    dropped = dist[~mask]
    names = np.array([s for s, _, _ in letters])
    words = [""] * len(par)
    for i in range(1, len(par)):
        words[i] = words[par[i]] + names[last[i]]
    sel = np.flatnonzero(mask)
    order = sorted(sel.tolist(), key=lambda i: (round(float(dist[i]), 12), words[i]))
    words = [words[i] for i in order]
    dist = dist[order]
    pts = pts[order]
    if not (cert is not None):
        words, pts, dist = _dedupe(words, pts, dist)
    front = np.concatenate(frontier) if frontier else np.zeros(0)
    if certified:
        horizon = float(front.min()) if len(front) else math.inf
        if radius is not None:
            horizon = min(horizon, radius)
        gap = cert["gap"]
    else:
        top = [d for word, d in zip(words, dist) if len(word) == word_bound]
        horizon = min(top) if top else math.inf
        gap = 0.0
    return OrbitTable(z, w, words, pts, np.asarray(dist, dtype=float), word_bound, radius,
                      horizon, certified, front, gap, spec.rank, dropped)


def _dedupe(words, pts, dist):
    """Drop rows whose point repeats an earlier one (hyperbolic distance < tau)."""
    keep = []
    for i in range(len(words)):
        dup = False
        for j in reversed(keep):
            if dist[i] - dist[j] > 1e-7:
                break
            if poincare_distance(pts[i], pts[j]) < 1e-7:
                dup = True
                break
        if not dup:
            keep.append(i)
    return [words[i] for i in keep], pts[keep], dist[keep]


def orbital_count(table: OrbitTable, r: float) -> tuple:
    """(N(r, z, w), truncated): rows with distance < r."""
    if r < 0:
        raise InputError("r must be >= 0")
    n = int(np.searchsorted(table.distances, r, side="left"))
    return n, r > table.horizon


# Cayley tree counts and the N-hat bounds

def cayley_counts(n: int, rank: int = 4) -> tuple:
    """(|S_n|, |B_n|) in the free group of the given rank."""
    if n < 0:
        raise InputError("n must be >= 0")
    k = 2 * rank
    sphere = 1 if n == 0 else k * (k - 1) ** (n - 1)
    if rank == 1:
        ball = 2 * n + 1
    else:
        ball = 1 + k * ((k - 1) ** n - 1) // (k - 2)
    return sphere, ball


def overlap_radius(spec: FuchsianSpec, p) -> float:
    """epsilon = half the shortest generator displacement of p."""
    return 0.5 * min(poincare_distance(p, spec.apply(s, p)) for s, _, _ in spec.letters())


def count_constant(epsilon: float) -> float:
    """A = e^eps / (4 Vol B_eps)."""
    return math.exp(epsilon) / (4 * ball_volume(epsilon))


def nhat_bounds(N0: int, epsilon: float, vol_eps_ball: float, R: float) -> tuple:
    """(49 N0 + 16, (49/4)(e^eps/vol) e^R + 16)."""
    if N0 < 1 or epsilon <= 0 or vol_eps_ball <= 0:
        raise InputError("need N0 >= 1, epsilon > 0, vol > 0")
    return 49 * N0 + 16, 49 / 4 * math.exp(epsilon) / vol_eps_ball * math.exp(R) + 16


def nhat_ceiling_bound(N0: int) -> int:
    """|B_{n+1}| with n the least level whose ball holds N0 elements."""
    n = 0
    while cayley_counts(n)[1] < N0:
        n += 1
    return cayley_counts(n + 1)[1]


def slice_volume_bound(R: float, epsilon: float, vol_eps_ball: float) -> float:
    return OCTAGON_VOLUME * nhat_bounds(1, epsilon, vol_eps_ball, R)[1]


def measured_nhat(spec: FuchsianSpec, p, R: float, n_radial: int = 64, n_angular: int = 720) -> int:
    """Translates g(D) met by B(p, R), found by reducing sample points of the ball.

    A lower estimate: thin slivers between sample points can be missed.
    """
    p = _disk_point(p)
    Tp = translation(p)
    found = set()
    for i in range(n_radial + 1):
        rho = R * i / n_radial * (1 - 1e-12)
        t = math.tanh(rho / 2)
        m = 1 if i == 0 else n_angular
        for j in range(m):
            th = 2 * math.pi * (j + 0.5 * (i % 2)) / m
            x = complex(_act(Tp[0], Tp[1], t * complex(math.cos(th), math.sin(th))))
            found.add(spec.reduce(x)[0])
    return len(found)


# Poincare series, critical exponent

@dataclass(frozen=True)
class SeriesValue:
    value: float
    tail_bound: float
    terms: int

    def as_dict(self) -> dict:
        return {"value": self.value, "tail_bound": self.tail_bound, "terms": self.terms}


def poincare_series(table: OrbitTable, s: float, h=None) -> SeriesValue:
    """Partial sum of e^{-s rho} h(e^rho) over the table, with a tail bound.

    The tail bound sums, over every subtree left out of the table, e^{-s beta}
    times a geometric series: each further letter adds at least the gap
    between isometric disks and multiplies the count by 2k - 1.
    """
    d = table.distances
    terms = np.exp(-s * d)
    if h is not None:
        terms = terms * np.array([h(math.exp(x)) for x in d])
    value = math.fsum(terms.tolist())
    tail = math.inf
    if table.certified and h is None:
        growth = (2 * table.rank - 1) * math.exp(-s * table.gap)
        if growth < 1:
            tail = math.fsum(np.exp(-s * table.frontier).tolist()) / (1 - growth)
            # enumerated rows cut at the radius
            tail += math.fsum(np.exp(-s * table.dropped).tolist())
    return SeriesValue(value, tail, len(d))


def cyclic_series_closed_form(s: float, length: float) -> float:
    """sum over n in Z of e^{-s |n| length}."""
    q = math.exp(-s * length)
    return (1 + q) / (1 - q)


@dataclass(frozen=True)
class ExponentEstimate:
    limsup: float
    bisection: float
    rows: int
    horizon: float

    @property
    def spread(self) -> float:
        return abs(self.limsup - self.bisection)

    def as_dict(self) -> dict:
        return {"limsup": self.limsup, "bisection": self.bisection, "spread": self.spread,
                "rows": self.rows, "horizon": self.horizon}


def critical_exponent(table: OrbitTable) -> ExponentEstimate:
    """Two estimates of the critical exponent from the rows below the horizon.

    limsup: the largest log n / rho_n over the last quartile of rows.
    bisection: the s at which two adjacent equal-width shells carry equal
    series mass.
    """
    d = table.below_horizon()
    n = len(d)
    if n < MIN_ROWS:
        raise TooFewRows(f"{n} rows below the horizon, need {MIN_ROWS}")
    idx = np.arange(1, n + 1)
    q = 3 * n // 4
    tail = d[q:]
    pos = tail > 0
    est1 = float(np.max(np.log(idx[q:][pos]) / tail[pos])) if pos.any() else 0.0

    top = float(d[-1])
    # shells [f, (1+f)/2) and [(1+f)/2, 1) of the radius range have equal width;
    # the median over several splits smooths the lumpy distance spectrum
    ests = [_shell_balance(d, f * top, (1 + f) / 2 * top, top) for f in np.linspace(0.2, 0.5, 7)]
    est2 = float(np.median(ests))
    return ExponentEstimate(est1, est2, n, float(table.horizon))


def _shell_balance(d, r0, r1, r2) -> float:
    lo = d[(d >= r0) & (d < r1)]
    hi = d[(d >= r1) & (d <= r2)]
    if len(lo) == 0 or len(hi) == 0:
        raise TooFewRows("empty shell")
    m = lo.min()

    def excess(s):
        return math.log(np.exp(-s * (hi - m)).sum()) - math.log(np.exp(-s * (lo - m)).sum())

    a, b = -1.0, 4.0
    if excess(a) < 0:
        return 0.0
    if excess(b) > 0:
        return b
    for _ in range(60):
        mid = (a + b) / 2
        if excess(mid) > 0:
            a = mid
        else:
            b = mid
    return max((a + b) / 2, 0.0)


# Patterson-Sullivan atoms

@dataclass
class AtomMeasure:
    """Weighted Dirac masses at orbit points; weights sum to one."""
    points: np.ndarray
    weights: np.ndarray
    distances: np.ndarray
    scale: float
    s: float

    @property
    def atoms(self) -> list:
        return list(zip(self.points.tolist(), self.weights.tolist()))

    @property
    def total(self) -> float:
        return math.fsum(self.weights.tolist())

    def mass_within(self, r: float) -> float:
        return math.fsum(self.weights[self.distances < r].tolist())

    def mass_outside(self, r: float) -> float:
        return math.fsum(self.weights[self.distances >= r].tolist())

    def as_dict(self, limit: int = 50) -> dict:
        return {"s": self.s, "total": self.total, "scale": self.scale, "atoms": len(self.weights),
                "head": [[p.real, p.imag, w] for p, w in zip(self.points[:limit], self.weights[:limit])]}


def ps_atoms(table: OrbitTable, s: float, h=None, companion: OrbitTable | None = None) -> AtomMeasure:
    """Atoms e^{-s rho(z, g w)} h(e^rho) at g w, over f*_s(w, w).

    `companion` is a table based at w; the table itself serves when z = w.
    The raw masses add up to f*_s(z, w)/f*_s(w, w), kept as `scale`; the
    stored weights are those masses divided by `scale`.
    """
    if companion is None:
        if abs(table.z - table.w) > 0:
            raise InputError("a companion table based at w is needed when z != w")
        companion = table
    if abs(companion.z - table.w) > TAU or abs(companion.w - table.w) > TAU:
        raise InputError("companion table must have both basepoints at w")

    def raw(t):
        e = np.exp(-s * t.distances)
        if h is not None:
            e = e * np.array([h(math.exp(x)) for x in t.distances])
        return e

    num = raw(table)
    fzw = math.fsum(num.tolist())
    fww = math.fsum(raw(companion).tolist())
    weights = num / fzw
    return AtomMeasure(table.points.copy(), weights, table.distances.copy(), fzw / fww, s)


def quotient_distance(spec: FuchsianSpec, lift1, lift2, word_bound: int) -> float:
    """min over enumerated g of rho(lift1, g lift2); an upper bound for the quotient."""
    t = orbit_enumerate(spec, lift1, lift2, word_bound)
    return float(t.distances.min())


def entropy_volume_estimate(samples) -> float:
    """Least-squares slope of log volume against r over the largest-r half."""
    samples = [(float(r), float(v)) for r, v in samples]
    if len(samples) < 3:
        raise TooFewSamples(f"{len(samples)} samples, need 3")
    rs = [r for r, _ in samples]
    if any(b <= a for a, b in zip(rs, rs[1:])):
        raise InputError("radii must increase")
    if any(v <= 0 for _, v in samples):
        raise InputError("volumes must be positive")
    half = samples[len(samples) // 2:]
    x = np.array([r for r, _ in half])
    y = np.log([v for _, v in half])
    return float(np.polyfit(x, y, 1)[0])
