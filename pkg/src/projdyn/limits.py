"""Quasi-projective limits, word orbits and limit-set approximations."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .errors import Diverged, InputError, NoLimit, NumericError
from .proj import (ProjMap, ProjPoint, ProjSubspace, QuasiProjMap,
                   distance_to_subspace, proj_distance, span)
from .scalars import TAU

GAP_KEEP = 1e-4
GAP_DROP = 1e-12
ORDER_THRESHOLD = 64


class LimitSetDescriptor:
    """Finite union of projective subspaces (points are 0-dimensional ones)."""

    def __init__(self, components=(), cloud=None, exactness: str = "symbolic",
                 ambient: int | None = None, tol: float = 1e-7):
        subs = []
        for c in components:
            if isinstance(c, ProjPoint):
                c = ProjSubspace([c.lift])
            if c.proj_dim >= 0:
                subs.append(c)
        self.ambient = ambient if ambient is not None else (subs[0].ambient if subs else 2)
        self.components = _irredundant(subs, tol)
        self.cloud = [] if cloud is None else list(cloud)
        self.exactness = exactness

    def __len__(self):
        return len(self.components)

    def is_empty(self) -> bool:
        return not self.components

    def distance(self, v) -> float:
        if not self.components:
            return float("inf")
        return min(distance_to_subspace(v, c) for c in self.components)

    def contains_point(self, v, tol: float = 1e-6) -> bool:
        return self.distance(v) <= tol

    def contains_subspace(self, s: ProjSubspace, tol: float = 1e-7) -> bool:
        return any(c.contains_subspace(s, tol) for c in self.components)

    def equals(self, other: "LimitSetDescriptor", tol: float = 1e-7) -> bool:
        if len(self.components) != len(other.components):
            return False
        return (all(other.contains_subspace(c, tol) for c in self.components)
                and all(self.contains_subspace(c, tol) for c in other.components))

    def cloud_error(self) -> float:
        """Largest distance from a cloud point to the symbolic components."""
        return max((self.distance(v) for v in self.cloud), default=0.0)

    def dims(self) -> list:
        return sorted(c.proj_dim for c in self.components)

    def describe(self) -> str:
        if not self.components:
            return "∅"
        return " ∪ ".join(sorted((_label(c) for c in self.components),
                                 key=lambda t: (t.startswith("⟨"), t)))

    def union(self, other: "LimitSetDescriptor") -> "LimitSetDescriptor":
        return LimitSetDescriptor(self.components + other.components,
                                  self.cloud + other.cloud, self.exactness, self.ambient)

    def __repr__(self):
        return f"LimitSetDescriptor({self.describe()})"


def _irredundant(subs, tol):
    out = []
    for s in sorted(subs, key=lambda c: -c.proj_dim):
        if any(o.contains_subspace(s, tol) for o in out):
            continue
        out.append(s)
    return sorted(out, key=_sort_key)


def _sort_key(c: ProjSubspace):
    B = [la.float_vec(b) for b in c.basis]
    return (c.proj_dim, tuple(tuple(np.round(np.abs(b), 6)) for b in B))


def _label(c: ProjSubspace) -> str:
    idx = []
    for b in c.basis:
        v = la.float_vec(b)
        nz = np.flatnonzero(np.abs(v) > 1e-9)
        if len(nz) != 1:
            idx = None
            break
        idx.append(int(nz[0]) + 1)
    if idx is None:
        coords = "; ".join("[" + ":".join(_fmt(x) for x in la.float_vec(b)) + "]" for b in c.basis)
        return ("{" if c.proj_dim == 0 else "⟨") + coords + ("}" if c.proj_dim == 0 else "⟩")
    names = ",".join(f"e{i}" for i in sorted(idx))
    if c.proj_dim == 0:
        return "{" + names + "}"
    if c.proj_dim == c.ambient:
        return f"CP^{c.ambient}"
    return "⟨" + names + "⟩"


def _fmt(x: complex) -> str:
    re, im = round(x.real, 6) + 0.0, round(x.imag, 6) + 0.0
    if im == 0:
        return f"{re:g}"
    return f"{re:g}{im:+g}i"


# words

def _letters(k: int):
    return [chr(ord("a") + i) for i in range(k)]


@dataclass
class WordOrbit:
    """Reduced words in a symmetric generating set up to a length bound."""
    generators: list
    max_length: int
    names: list = field(default_factory=list)
    elements: list = field(default_factory=list)   # (word, ProjMap) deduplicated

    @classmethod
    def build(cls, generators, max_length: int, add_inverses: bool = True,
              max_elements: int = 200000) -> "WordOrbit":
        gens = [g.to_float() if isinstance(g, ProjMap) else ProjMap(np.asarray(g, dtype=complex))
                for g in generators]
        letters = _letters(len(gens))
        allg, names, inv = [], [], []
        for g, a in zip(gens, letters):
            allg.append(g)
            names.append(a)
        if add_inverses:
            for g, a in zip(gens, letters):
                gi = g.inverse()
                if any(h.equals(gi) for h in allg):
                    continue
                allg.append(gi)
                names.append(a.upper())
        for g in allg:
            gi = g.inverse()
            inv.append(next((k for k, h in enumerate(allg) if h.equals(gi)), -1))
        orbit = cls(allg, max_length, names)
        n1 = allg[0].n + 1 if allg else 3
        seen: dict = {}
        ident = np.eye(n1, dtype=complex)
        orbit._insert(seen, "", ident)
        frontier = deque([("", -1, ident)])
        for _ in range(max_length):
            nxt = deque()
            while frontier:
                word, last, M = frontier.popleft()
                for k, g in enumerate(allg):
                    if last >= 0 and inv[last] == k:
                        continue
                    P = M @ np.asarray(g.matrix)
                    P = P / np.abs(P).max()
                    w = word + names[k]
                    if orbit._insert(seen, w, P):
                        nxt.append((w, k, P))
                    if len(orbit.elements) >= max_elements:
                        raise InputError("orbit too large; lower max_length")
            frontier = nxt
        return orbit

    def _insert(self, seen: dict, word: str, P) -> bool:
        key = _bucket_key(P)
        bucket = seen.setdefault(key, [])
        for Q in bucket:
            if _entrywise_equal(P, Q):
                return False
        bucket.append(P)
        self.elements.append((word, ProjMap(P)))
        return True

    def matrices(self):
        return [g.float_matrix() for _, g in self.elements]


def _pivot_normalize(P):
    return P / P.ravel()[int(np.argmax(np.abs(P).ravel() > 0.5 * np.abs(P).max()))]


def _bucket_key(P):
    # entries can span many orders of magnitude, so bucket on log-moduli
    a = np.abs(_pivot_normalize(P)).ravel()
    return tuple(round(float(np.log10(x)), 3) if x > 1e-280 else None for x in a)


def _entrywise_equal(P, Q, rel: float = 1e-9) -> bool:
    """Projective equality judged entry by entry, so tiny entries still count."""
    A, B = _pivot_normalize(P), _pivot_normalize(Q)
    return bool(np.all(np.abs(A - B) <= rel * np.maximum(np.abs(A), np.abs(B)) + 1e-300))


# quasi-projective limits

def _normalized(M):
    return M / np.linalg.norm(M)


def qp_limit_of_powers(g, direction: str = "+", kmax: int = 2 ** 64,
                       tol: float = TAU) -> QuasiProjMap:
    """Limit of g^{+-k} up to scale, detected by repeated squaring."""
    g = g if isinstance(g, ProjMap) else ProjMap(g)
    A = g.sl_matrix()
    if direction in ("-", -1):
        A = np.linalg.inv(A)
    elif direction not in ("+", 1):
        raise InputError("direction must be + or -")
    A = _normalized(A)
    steps = max(1, int(kmax).bit_length() - 1)
    M = A
    streak, stable_at = 0, None
    bounded = True
    for j in range(steps):
        s = np.linalg.svd(M, compute_uv=False)
        if s[-1] / s[0] < 1e-6:
            bounded = False
        N = _normalized(M @ M)
        d = proj_distance(N, M)
        M = N
        streak = streak + 1 if d <= tol else 0
        if streak >= 3 and stable_at is None:
            stable_at = j
        if stable_at is not None and (d <= 1e-15 or j >= stable_at + 12):
            break
    if stable_at is None:
        if bounded:
            raise NoLimit("normalized powers stay bounded without converging")
        raise Diverged("no stabilization within the power budget")
    L = M.copy()
    L[np.abs(L) <= tol * np.abs(L).max()] = 0
    if la.rank(L, tol) == len(L):
        raise NoLimit("powers stay in a compact set")
    # the limit must absorb one more factor of g on either side
    if proj_distance(L @ A, L) > 1e3 * tol or proj_distance(A @ L, L) > 1e3 * tol:
        raise NoLimit("rotating phases: the powers have several accumulation points")
    return QuasiProjMap(L, tol)


@dataclass
class LimitPair:
    tau: QuasiProjMap
    sigma: QuasiProjMap | None
    source: str


def _gap_truncate(M):
    """Rank-truncated copy of M when its normalized singular values show a clean gap."""
    u, s, vh = np.linalg.svd(M)
    r = s / s[0]
    if np.any((r < GAP_KEEP) & (r > GAP_DROP)):
        return None
    keep = int(np.sum(r >= GAP_KEEP))
    if keep == len(s):
        return None
    T = (u[:, :keep] * s[:keep]) @ vh[:keep]
    T[np.abs(T) <= 1e-12 * np.abs(T).max()] = 0
    return T


def _infinite_order(g: ProjMap) -> bool:
    A = g.sl_matrix()
    P = np.eye(len(A), dtype=complex)
    I = P.copy()
    for _ in range(ORDER_THRESHOLD):
        P = P @ A
        P = P / np.abs(P).max()
        if proj_distance(P, I) <= TAU:
            return False
    return True


def limit_pairs(orbit: WordOrbit, tol: float = TAU, powers: bool = True) -> list:
    """(tau, sigma) pairs: power limits of words and gap-truncated orbit elements."""
    out = []
    for word, g in orbit.elements:
        if not word:
            continue
        M = g.float_matrix()
        T = _gap_truncate(M / np.abs(M).max())
        if T is not None:
            Mi = np.linalg.inv(M)
            S = _gap_truncate(Mi / np.abs(Mi).max())
            out.append(LimitPair(QuasiProjMap(T, tol), QuasiProjMap(S, tol) if S is not None else None,
                                 word))
        if powers:
            try:
                tp = qp_limit_of_powers(g, "+", tol=tol)
                tm = qp_limit_of_powers(g, "-", tol=tol)
            except NumericError:
                continue
            out.append(LimitPair(tp, tm, word + "^+"))
            out.append(LimitPair(tm, tp, word + "^-"))
    return _cluster_pairs(out, tol)


def _canon_key(q: QuasiProjMap):
    M = q.float_matrix()
    return tuple(np.round(np.concatenate([M.real.ravel(), M.imag.ravel()]), 8).tolist())


def _cluster_pairs(pairs, tol):
    pairs = sorted(pairs, key=lambda p: (_canon_key(p.tau), p.source))
    reps: list = []
    for p in pairs:
        hit = next((r for r in reps if r.tau.equals(p.tau, tol * 10)
                    and ((r.sigma is None and p.sigma is None) or
                         (r.sigma is not None and p.sigma is not None and r.sigma.equals(p.sigma, tol * 10)))),
                   None)
        if hit is None:
            reps.append(p)
    return reps


def limit_maps_of_group(orbit: WordOrbit, tol: float = TAU) -> list:
    """Cluster representatives of quasi-projective limits seen in the orbit."""
    seen = []
    for p in limit_pairs(orbit, tol):
        if not any(q.equals(p.tau, tol * 10) for q in seen):
            seen.append(p.tau)
    return seen


def equicontinuity_complement(orbit: WordOrbit, tol: float = TAU) -> LimitSetDescriptor:
    """Union of kernels of the limit maps: the part of CP^n outside Eq(Gamma) seen so far."""
    n = orbit.generators[0].n if orbit.generators else 2
    kers = [q.kernel for q in limit_maps_of_group(orbit, tol) if q.kernel.proj_dim >= 0]
    return LimitSetDescriptor(kers, ambient=n)


def _eigenspaces(g: ProjMap) -> list:
    from .classify import eigen3
    ed = eigen3(g)
    spaces = [span(*vs) for vs in ed.vectors]
    # eigenvalues whose ratio is a root of unity of small order share fixed points of g^q
    vals = ed.values
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            r = complex(vals[i]) / complex(vals[j])
            if abs(abs(r) - 1) > 1e-9:
                continue
            x = (np.angle(r) / (2 * np.pi)) % 1.0
            for q in range(1, ORDER_THRESHOLD + 1):
                if abs(x * q - round(x * q)) <= 1e-9 * q:
                    spaces.append(span(*(ed.vectors[i] + ed.vectors[j])))
                    break
    return spaces


def approximate_kulkarni(orbit: WordOrbit, samples: int = 64, seed: int = 0,
                         tol: float = TAU):
    """(L0, L1, L2) as descriptors with sampled clouds."""
    n = orbit.generators[0].n if orbit.generators else 2
    rng = np.random.default_rng(seed)
    l0 = []
    for word, g in orbit.elements:
        if word and len(g.matrix) == 3 and _infinite_order(g):
            l0.extend(_eigenspaces(g))
    L0 = LimitSetDescriptor(l0, ambient=n, exactness="sampled")
    pairs = limit_pairs(orbit, tol)
    L1 = LimitSetDescriptor([p.tau.image for p in pairs], ambient=n, exactness="sampled")
    base = L0.union(L1)
    l2 = []
    for p in pairs:
        if p.sigma is None or p.tau.kernel.proj_dim < 0:
            continue
        if not base.contains_subspace(p.tau.kernel):
            l2.append(p.sigma.kernel)
    L2 = LimitSetDescriptor(l2, ambient=n, exactness="sampled")
    # clouds: L1 from actual orbit points of random starts under near-singular elements
    L0.cloud = _cloud_on(L0, samples, rng)
    L1.cloud = _orbit_cloud(orbit, L0, samples, rng) + _cloud_on(L1, samples, rng)
    L2.cloud = _cloud_on(L2, samples, rng)
    return L0, L1, L2


def _cloud_on(desc: LimitSetDescriptor, k: int, rng) -> list:
    out = []
    for c in desc.components:
        for v in c.sample(k, rng):
            out.append(v / np.linalg.norm(v))
    return out


def _orbit_cloud(orbit: WordOrbit, L0: LimitSetDescriptor, k: int, rng) -> list:
    n1 = orbit.generators[0].n + 1 if orbit.generators else 3
    zs = []
    while len(zs) < max(1, k // 8):
        z = rng.normal(size=n1) + 1j * rng.normal(size=n1)
        if L0.distance(z) > 1e-3:
            zs.append(z)
    out = []
    for word, g in orbit.elements:
        M = g.float_matrix()
        s = np.linalg.svd(M, compute_uv=False)
        r = s / s[0]
        if r[-1] > GAP_DROP or np.any((r < GAP_KEEP) & (r > GAP_DROP)):
            continue
        for z in zs:
            v = M @ z
            out.append(v / np.linalg.norm(v))
    return out


def approximate_kulkarni_union(orbit: WordOrbit, samples: int = 64, seed: int = 0) -> LimitSetDescriptor:
    L0, L1, L2 = approximate_kulkarni(orbit, samples, seed)
    out = L0.union(L1).union(L2)
    out.exactness = "sampled"
    return out


def approximate_CG(orbit: WordOrbit) -> LimitSetDescriptor:
    """Dominant eigenvectors of proximal words."""
    from .classify import dominant_vector
    pts = []
    for word, g in orbit.elements:
        if not word or len(g.matrix) != 3:
            continue
        v = dominant_vector(g)
        if v is not None:
            pts.append(v)
    n = orbit.generators[0].n if orbit.generators else 2
    d = LimitSetDescriptor(pts, ambient=n, exactness="sampled")
    d.cloud = [np.asarray(p.lift) for p in pts]
    return d
