"""Cartan projections, block decompositions and Frances limit sets."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BadSubset, EmptyInput, InputError, NoDivergentSequence, ZeroPoint
from .limits import LimitSetDescriptor, WordOrbit
from .proj import ProjMap, ProjPoint, ProjSubspace, coordinate_subspace, distance_to_subspace, span

SPLIT_GROWTH = math.log(1.5)   # block boundary if log(s_i/s_{i+1}) grows by more than this
FLAG_TOL = 1e-4     # consecutive-k flag change; polynomial gaps move like 1/k^2


def _num(x):
    """Exact Fraction for ints, Fractions and 'p/q' strings; float otherwise."""
    if isinstance(x, bool):
        raise InputError("boolean is not a number")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return x
    raise InputError(f"not a positive real: {x!r}")


def _same(x, y) -> bool:
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x == y
    return abs(float(x) - float(y)) <= 1e-12 * max(abs(float(x)), abs(float(y)))


def _log(x) -> float:
    if isinstance(x, Fraction):
        return math.log(x.numerator) - math.log(x.denominator)
    return math.log(x)


# Cartan projection

def cartan_projection(g):
    """g = K1 diag(mu) K2^* with mu non-increasing.

    Phases: the first nonzero entry of each column of K1 is real positive.
    """
    M = g.sl_matrix() if isinstance(g, ProjMap) else np.asarray(g, dtype=complex)
    if abs(np.linalg.det(M)) <= 1e-300:
        raise InputError("singular matrix")
    U, s, Vh = np.linalg.svd(M)
    for j in range(U.shape[1]):
        col = U[:, j]
        i = int(np.flatnonzero(np.abs(col) > 1e-12 * np.abs(col).max())[0])
        ph = col[i] / abs(col[i])
        U[:, j] *= ph.conjugate()
        Vh[j, :] *= ph
    return U, s, Vh.conj().T


# sequence specs and blocks

@dataclass(frozen=True)
class SingularSequenceSpec:
    """Diagonal laws lambda_{i,k} = c_i b_i^k."""
    entries: tuple

    def __post_init__(self):
        ent = tuple((_num(c), _num(b)) for c, b in self.entries)
        if not ent:
            raise EmptyInput("no entries")
        for c, b in ent:
            if not (c > 0 and b > 0):
                raise InputError("c_i and b_i must be positive")
        for (_, b0), (_, b1) in zip(ent, ent[1:]):
            if b1 > b0 and not _same(b0, b1):
                raise InputError("b_i must be non-increasing")
        object.__setattr__(self, "entries", ent)

    @classmethod
    def from_pairs(cls, pairs) -> "SingularSequenceSpec":
        return cls(tuple((c, b) for c, b in pairs))

    @property
    def size(self) -> int:
        return len(self.entries)

    def log_values(self, k: float) -> np.ndarray:
        return np.array([_log(c) + k * _log(b) for c, b in self.entries])

    def values(self, k: float) -> np.ndarray:
        """lambda_{i,k} scaled so the largest is 1."""
        lv = self.log_values(k)
        return np.exp(lv - lv.max())


@dataclass
class BlockDecomposition:
    """Consecutive blocks of a diverging diagonal sequence (indices 0-based)."""
    spec: SingularSequenceSpec
    blocks: list
    limit_blocks: list            # diagonal entries of D_i
    ratios: list                  # within-block limits lambda_j / lambda_{j+1}
    notes: list = field(default_factory=list)

    @property
    def m(self) -> int:
        return len(self.blocks)

    @property
    def n(self) -> int:
        return self.spec.size - 1

    @property
    def dims(self) -> tuple:
        return tuple(len(b) for b in self.blocks)

    def subspace(self, i: int) -> ProjSubspace:
        """A_i, 1-based."""
        return coordinate_subspace([j + 1 for j in self.blocks[i - 1]], self.n)

    def log_alpha(self, i: int, k: float) -> float:
        c, b = self.spec.entries[self.blocks[i - 1][0]]
        return _log(c) + k * _log(b)

    def lead_ratio(self, i: int, k: float) -> float:
        """alpha_{i,k} / alpha_{i+1,k}."""
        return math.exp(self.log_alpha(i, k) - self.log_alpha(i + 1, k))

    def D(self, i: int) -> np.ndarray:
        return np.diag(np.asarray(self.limit_blocks[i - 1], dtype=float))

    def block_of(self, index: int) -> int:
        """1-based block number containing 1-based coordinate index."""
        return next(i + 1 for i, b in enumerate(self.blocks) if index - 1 in b)

    def as_dict(self) -> dict:
        return {"dims": list(self.dims),
                "blocks": [[j + 1 for j in b] for b in self.blocks],
                "limit_blocks": [[str(x) for x in d] for d in self.limit_blocks],
                "ratios": [str(r) for r in self.ratios],
                "notes": list(self.notes)}


def blocks_of(spec: SingularSequenceSpec) -> BlockDecomposition:
    ent = spec.entries
    blocks, cur = [], [0]
    for j in range(1, len(ent)):
        if _same(ent[j][1], ent[j - 1][1]):
            cur.append(j)
        else:
            blocks.append(cur)
            cur = [j]
    blocks.append(cur)
    limits, ratios, notes = [], [], []
    for i, b in enumerate(blocks):
        c0 = ent[b[0]][0]
        limits.append([ent[j][0] / c0 for j in b])
        for j, j1 in zip(b, b[1:]):
            ratios.append(ent[j][0] / ent[j1][0])
            if ent[j1][0] > ent[j][0]:
                notes.append(f"block {i + 1}: entries {j + 1},{j1 + 1} not in Cartan order "
                             f"(limit ratio {ent[j][0] / ent[j1][0]})")
    return BlockDecomposition(spec, blocks, limits, ratios, notes)


# flags

@dataclass
class FlagPair:
    """V_i = <A_1..A_i>, W_i = <A_{i+1}..A_m> minus A_m."""
    V: list
    W: list
    last: ProjSubspace

    def in_V(self, i: int, z, tol: float = 1e-9) -> bool:
        return self.V[i - 1].contains(z, tol)

    def in_W(self, i: int, z, tol: float = 1e-9) -> bool:
        return self.W[i].contains(z, tol) and not self.last.contains(z, tol)


def flags_of(bd: BlockDecomposition) -> FlagPair:
    n, m = bd.n, bd.m
    V, acc = [], []
    for b in bd.blocks:
        acc = acc + [j + 1 for j in b]
        V.append(coordinate_subspace(acc, n))
    W = []
    for i in range(m - 1):
        idx = [j + 1 for b in bd.blocks[i:] for j in b]
        W.append(coordinate_subspace(idx, n))
    return FlagPair(V, W, bd.subspace(m))


# pointwise dynamics

@dataclass
class DynamicImage:
    """V_z^(i) = {[zeta_1 : ... : zeta_{i-1} : y_z : 0 ...]}, stored as (V_{i-1}, y_z)."""
    block: int
    base: ProjSubspace
    apex: np.ndarray

    def closure(self) -> ProjSubspace:
        if self.base.basis:
            return span(self.base, self.apex)
        return ProjSubspace([self.apex])

    def distance(self, v) -> float:
        return distance_to_subspace(v, self.closure())

    def contains(self, v, tol: float = 1e-6) -> bool:
        return self.distance(v) <= tol

    def describe(self) -> str:
        y = ":".join(f"{x.real:g}" if abs(x.imag) < 1e-12 else f"{x:g}" for x in self.apex)
        base = "∅" if not self.base.basis else f"V_{self.block - 1}"
        return f"V_z^({self.block}) = join({base}, [{y}])"


def _lift(z) -> np.ndarray:
    v = z.lift if isinstance(z, ProjPoint) else z
    v = np.array([complex(x) for x in v])
    if not np.any(np.abs(v) > 0):
        raise ZeroPoint("zero vector")
    return v


def _leading_block(bd: BlockDecomposition, v: np.ndarray, tol: float = 0.0) -> int:
    scale = np.abs(v).max()
    for i, b in enumerate(bd.blocks):
        if np.abs(v[b]).max() > tol * scale:
            return i + 1
    raise ZeroPoint("zero vector")


def dynamic_image(bd: BlockDecomposition, z) -> DynamicImage:
    v = _lift(z)
    i = _leading_block(bd, v)
    b = bd.blocks[i - 1]
    apex = np.zeros(len(v), dtype=complex)
    apex[b] = np.asarray(bd.limit_blocks[i - 1], dtype=float) * v[b]
    prev = [j + 1 for blk in bd.blocks[:i - 1] for j in blk]
    base = coordinate_subspace(prev, bd.n, exact=False) if prev else ProjSubspace([], ambient=bd.n)
    return DynamicImage(i, base, apex)


def apply_sequence(bd: BlockDecomposition, k: float, v) -> np.ndarray:
    """g_k v, normalized to unit length (computed in log scale)."""
    v = np.asarray(v, dtype=complex)
    nz = np.abs(v) > 0
    if not nz.any():
        raise ZeroPoint("zero vector")
    # rescale against the largest surviving coordinate, not the largest lambda
    lw = np.full(len(v), -np.inf)
    lw[nz] = bd.spec.log_values(k)[nz] + np.log(np.abs(v[nz]))
    w = np.zeros(len(v), dtype=complex)
    w[nz] = np.exp(lw[nz] - lw.max()) * v[nz] / np.abs(v[nz])
    return w / np.linalg.norm(w)


def realizing_sequence(bd: BlockDecomposition, z, zetas, k: float) -> np.ndarray:
    """X_k with X_k -> z and g_k X_k -> [zeta_1 : ... : zeta_{i-1} : y_z : 0 ...]."""
    v = _lift(z)
    i = _leading_block(bd, v)
    if len(zetas) != i - 1:
        raise InputError(f"need {i - 1} block vectors")
    X = v.copy()
    for j in range(1, i):
        b = bd.blocks[j - 1]
        r = math.exp(bd.log_alpha(i, k) - bd.log_alpha(j, k))
        X[b] = r * np.asarray(zetas[j - 1], dtype=complex) / np.asarray(bd.limit_blocks[j - 1], dtype=float)
    return X


def realizing_target(bd: BlockDecomposition, z, zetas) -> np.ndarray:
    v = _lift(z)
    img = dynamic_image(bd, v)
    t = img.apex.copy()
    for j in range(1, img.block):
        t[bd.blocks[j - 1]] = np.asarray(zetas[j - 1], dtype=complex)
    return t


def middle_space(bd: BlockDecomposition, n: int | None = None):
    n = bd.n if n is None else n
    s0 = bd.block_of((n + 1) // 2)
    return s0, flags_of(bd).V[s0 - 1]


# cyclic sequences

@dataclass
class CartanFlag:
    """Attracting Cartan data of g^k estimated by orthogonal iteration."""
    Q: np.ndarray                 # approximates K1(g^k) up to block-diagonal unitaries
    log_sv: np.ndarray            # log singular values of g^k (up to bounded error)
    blocks: list
    k: int
    stable: bool

    @property
    def dims(self) -> tuple:
        return tuple(len(b) for b in self.blocks)

    def V(self, s: int) -> np.ndarray:
        d = sum(len(b) for b in self.blocks[:s])
        return self.Q[:, :d]


def _orthogonal_iteration(M: np.ndarray, k: int, rng):
    n1 = M.shape[0]
    X = rng.normal(size=(n1, n1)) + 1j * rng.normal(size=(n1, n1))
    Q, _ = np.linalg.qr(X)
    logs = np.zeros(n1)
    history = []
    for _ in range(k):
        Q, R = np.linalg.qr(M @ Q)
        d = np.abs(np.diag(R))
        logs += np.log(d)
        ph = np.diag(R) / d
        Q = Q * ph
        history.append((Q.copy(), logs.copy()))
    return history


def _blocks_from_history(hist, kmax: int) -> list:
    """Split where the log gap grows: its late minimum beats its early maximum."""
    logs = np.array([h[1] for h in hist])
    gaps = logs[:, :-1] - logs[:, 1:]
    late = gaps[kmax // 2 - 1:].min(axis=0)
    early = gaps[kmax // 8 - 1:kmax // 4].max(axis=0)
    blocks, cur = [], [0]
    for j, grow in enumerate(late - early > SPLIT_GROWTH, start=1):
        if grow:
            blocks.append(cur)
            cur = [j]
        else:
            cur.append(j)
    blocks.append(cur)
    return blocks


def _projector(B: np.ndarray) -> np.ndarray:
    return B @ B.conj().T


def _unimodular(g) -> np.ndarray:
    M = g.sl_matrix() if isinstance(g, ProjMap) else np.asarray(g, dtype=complex)
    return M / abs(np.linalg.det(M)) ** (1.0 / M.shape[0])


def cartan_flag(g, kmax: int = 200, tol: float = FLAG_TOL, seed: int = 0) -> CartanFlag:
    """Iterate g on a random unitary frame until the block flag stabilizes."""
    M = _unimodular(g)
    rng = np.random.default_rng(seed)
    hist = _orthogonal_iteration(M, kmax, rng)
    blocks = _blocks_from_history(hist, kmax)
    if len(blocks) < 2:
        Q, logs = hist[-1]
        return CartanFlag(Q, logs, blocks, kmax, False)
    cuts = [sum(len(b) for b in blocks[:s]) for s in range(1, len(blocks))]
    for k in range(2, kmax):
        P = [[_projector(hist[kk][0][:, :d]) for d in cuts] for kk in (k - 2, k - 1, k)]
        if all(max(np.abs(P[0][j] - P[1][j]).max(), np.abs(P[1][j] - P[2][j]).max()) <= tol
               for j in range(len(cuts))):
            Q, logs = hist[k]
            return CartanFlag(Q, logs, blocks, k + 1, True)
    Q, logs = hist[-1]
    return CartanFlag(Q, logs, blocks, kmax, False)


def compound(M: np.ndarray, d: int) -> np.ndarray:
    """d-th exterior power of M in the lexicographic basis of d-subsets."""
    N = M.shape[0]
    subs = list(itertools.combinations(range(N), d))
    C = np.empty((len(subs), len(subs)), dtype=complex)
    for a, I in enumerate(subs):
        for b, J in enumerate(subs):
            C[a, b] = np.linalg.det(M[np.ix_(I, J)])
    return C


def limit_flag(g, d: int, squarings: int = 60) -> np.ndarray:
    """Orthonormal basis of lim of the top-d Cartan subspace of g^k.

    The d-th exterior power has a rank-one normalized limit exactly when d
    sits at a block boundary; its image is the Pluecker point of the limit.
    Repeated squaring reaches k = 2^squarings, so polynomial gaps converge too.
    """
    M = _unimodular(g)
    N = M.shape[0]
    if d >= N:
        return np.eye(N, dtype=complex)
    A = compound(M, d)
    A = A / np.abs(A).max()
    for _ in range(squarings):
        A = A @ A
        A = A / np.abs(A).max()
    U, s, _ = np.linalg.svd(A)
    if len(s) > 1 and s[1] > 1e-8 * s[0]:
        raise NoDivergentSequence(f"no isolated top {d}-dimensional Cartan subspace")
    w = U[:, 0]
    subs = list(itertools.combinations(range(N), d))
    index = {I: a for a, I in enumerate(subs)}
    vecs = []
    for J in itertools.combinations(range(N), d - 1):
        u = np.zeros(N, dtype=complex)
        for i in range(N):
            if i in J:
                continue
            I = tuple(sorted(J + (i,)))
            sign = (-1) ** sum(1 for j in J if j > i)
            u[i] = sign * w[index[I]]
        vecs.append(u)
    U2, s2, _ = np.linalg.svd(np.array(vecs).T)
    return U2[:, :d]


@dataclass
class SimpleInfinity:
    ok: bool
    kappa1: np.ndarray | None
    kappa2: np.ndarray | None
    k: int
    dims: tuple


def tends_simply_to_infinity(g, kmax: int = 200, tol: float = FLAG_TOL) -> SimpleInfinity:
    """Whether (g^k) has stabilized Cartan flags and diverging Cartan projection.

    Unitary factors are only meaningful up to unitaries inside each block, so
    stabilization is tested on the flag of block spans.
    """
    M = _unimodular(g)
    fwd = cartan_flag(M, kmax, tol)
    if not fwd.stable:
        return SimpleInfinity(False, None, None, fwd.k, fwd.dims)
    bwd = cartan_flag(np.linalg.inv(M), kmax, tol)
    k2 = bwd.Q[:, ::-1].conj().T if bwd.stable else None
    return SimpleInfinity(bwd.stable, fwd.Q, k2, max(fwd.k, bwd.k), fwd.dims)


def _snap(B: np.ndarray, n: int) -> ProjSubspace:
    s = ProjSubspace(list(B.T), ambient=n, tol=1e-8)
    basis = []
    for b in s.basis:
        b = np.where(np.abs(b) < 1e-9, 0, b)
        basis.append(b)
    return ProjSubspace(basis, ambient=n)


def _middle_dim(blocks, n: int) -> int:
    s0 = next(i + 1 for i, b in enumerate(blocks) if (n + 1) // 2 - 1 in b)
    return sum(len(b) for b in blocks[:s0])


def frances_sequence(g, kmax: int = 200) -> ProjSubspace:
    """L_a for the forward sequence a = (g^k), in the ambient frame."""
    M = _unimodular(g)
    n = M.shape[0] - 1
    fl = cartan_flag(M, kmax)
    if len(fl.blocks) < 2:
        raise NoDivergentSequence("Cartan projection of the powers stays bounded")
    return _snap(limit_flag(M, _middle_dim(fl.blocks, n)), n)


def frances_cyclic(g, kmax: int = 200) -> LimitSetDescriptor:
    """Union of L_a over a = (g^k) and a = (g^-k)."""
    M = _unimodular(g)
    fwd = frances_sequence(M, kmax)
    bwd = frances_sequence(np.linalg.inv(M), kmax)
    return LimitSetDescriptor([fwd, bwd], exactness="numeric", ambient=M.shape[0] - 1)


def frances_group_approx(orbit: WordOrbit, kmax: int = 120) -> list:
    """L_<w> for each word whose powers tend simply to infinity, deduplicated.

    Only cyclic sequences are enumerated, so this is an inner approximation.
    """
    out = []
    for word, h in orbit.elements:
        if not word:
            continue
        M = _unimodular(h)
        if not tends_simply_to_infinity(M, kmax).ok:
            continue
        fl = cartan_flag(M, kmax)
        L = _snap(limit_flag(M, _middle_dim(fl.blocks, M.shape[0] - 1)), M.shape[0] - 1)
        if not any(L.equals(o, 1e-7) for o in out):
            out.append(L)
    return out


def check_purely_dimensional(subspaces, n: int) -> dict:
    subspaces = list(subspaces)
    if not subspaces:
        raise EmptyInput("no subspaces")
    dims = [s.proj_dim for s in subspaces]
    k = max(dims)
    return {"k": k, "ok": bool(all(d == k for d in dims) and k >= n // 2)}


# polygons

@dataclass
class PolygonDoc:
    weights: tuple
    hulls: list                    # (subset, projective dimension)
    attracting: int = 1

    @property
    def m(self) -> int:
        return len(self.weights)

    @property
    def repelling(self) -> int:
        return self.m

    def vertices(self, radius: float = 100.0, cx: float = 150.0, cy: float = 150.0) -> list:
        m = self.m
        if m == 1:
            return [(cx, cy)]
        return [(cx + radius * math.sin(2 * math.pi * j / m), cy - radius * math.cos(2 * math.pi * j / m))
                for j in range(m)]

    def svg(self) -> str:
        pts = self.vertices()
        wmax = max(self.weights)
        out = ['<svg xmlns="http://www.w3.org/2000/svg" width="300" height="300" viewBox="0 0 300 300">',
               '<rect width="300" height="300" fill="white"/>']
        if self.m > 1:
            ring = " ".join(f"{x:.3f},{y:.3f}" for x, y in pts)
            out.append(f'<polygon points="{ring}" fill="none" stroke="black" stroke-width="1"/>')
        for subset, dim in self.hulls:
            ring = " ".join(f"{pts[i - 1][0]:.3f},{pts[i - 1][1]:.3f}" for i in subset)
            out.append(f'<polygon points="{ring}" fill="green" fill-opacity="0.25" stroke="green" '
                       f'stroke-width="1"><title>dim {dim}</title></polygon>')
        for j, ((x, y), w) in enumerate(zip(pts, self.weights), start=1):
            r = 4.0 + 12.0 * w / wmax
            fill = "red" if j == self.attracting else ("white" if j == self.repelling and self.m > 1 else "gray")
            out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{r:.3f}" fill="{fill}" stroke="black"/>')
            out.append(f'<text x="{x:.3f}" y="{y - r - 3:.3f}" font-size="10" text-anchor="middle">{w}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"

    def as_dict(self) -> dict:
        return {"m": self.m, "weights": list(self.weights), "attracting": self.attracting,
                "repelling": self.repelling,
                "hulls": [{"subset": list(s), "dim": d} for s, d in self.hulls]}


def polygon_export(bd: BlockDecomposition, hulls=()) -> PolygonDoc:
    out = []
    for h in hulls:
        h = sorted(set(int(i) for i in h))
        if not h or h[0] < 1 or h[-1] > bd.m:
            raise BadSubset(f"hull {h} outside 1..{bd.m}")
        out.append((tuple(h), sum(bd.dims[i - 1] for i in h) - 1))
    return PolygonDoc(bd.dims, out)
