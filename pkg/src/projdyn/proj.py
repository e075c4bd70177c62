"""Points, subspaces and maps of CP^n."""
from __future__ import annotations

from itertools import combinations

import numpy as np

from . import linalg as la
from .errors import (DegenerateConfiguration, IdenticalPoints, InputError,
                     NotGeneralPosition, SameLine, SignatureError,
                     SingularMatrix, ZeroMatrix, ZeroPoint)
from .scalars import TAU, Surd


def _vec_key(v):
    if la.is_exact(v):
        return tuple(v)
    return tuple(np.round(np.asarray(v), 9))


class ProjPoint:
    """A point [v] of CP^n stored by its canonical lift."""

    __slots__ = ("lift",)

    def __init__(self, lift, tol: float = TAU):
        if la.is_zero_vec(lift):
            raise ZeroPoint("zero lift")
        lift = la.canonical_lift(lift if la.is_exact(lift) else np.asarray(lift, dtype=complex), tol)
        if not la.is_exact(lift):
            lift.setflags(write=False)
        self.lift = lift

    @property
    def n(self) -> int:
        return len(self.lift) - 1

    @property
    def exact(self) -> bool:
        return la.is_exact(self.lift)

    def to_float(self) -> "ProjPoint":
        return self if not self.exact else ProjPoint(la.float_vec(self.lift))

    def equals(self, other: "ProjPoint", tol: float = TAU) -> bool:
        if self.exact and other.exact:
            return tuple(self.lift) == tuple(other.lift)
        a, b = la.float_vec(self.lift), la.float_vec(other.lift)
        return la.proportional(a, b, tol)

    def __eq__(self, other):
        return isinstance(other, ProjPoint) and self.equals(other)

    __hash__ = None

    def __repr__(self):
        return f"ProjPoint({list(self.lift)})"


def point(*coords) -> ProjPoint:
    if len(coords) == 1 and not isinstance(coords[0], (int, float, complex, Surd)):
        coords = coords[0]
    return ProjPoint(coords if la.is_exact(coords) else np.asarray(coords, dtype=complex))


def basis_point(i: int, n: int, exact: bool = True) -> ProjPoint:
    """e_i in CP^n, 1-based as in the usual notation."""
    v = [0] * (n + 1)
    v[i - 1] = 1
    return ProjPoint(la.exact_vec(v) if exact else np.asarray(v, dtype=complex))


class ProjSubspace:
    """Projectivized linear subspace; basis kept in reduced row echelon form."""

    __slots__ = ("basis", "ambient")

    def __init__(self, vectors, ambient: int | None = None, tol: float = TAU):
        vectors = list(vectors)
        if ambient is None:
            if not vectors:
                raise InputError("empty subspace needs an explicit ambient dimension")
            ambient = len(vectors[0]) - 1
        self.ambient = ambient
        self.basis = la.canonical_span(vectors, tol) if vectors else []

    @property
    def proj_dim(self) -> int:
        return len(self.basis) - 1

    @property
    def exact(self) -> bool:
        return bool(self.basis) and la.is_exact(self.basis[0])

    def matrix(self):
        return self.basis

    def contains(self, p, tol: float = TAU) -> bool:
        v = p.lift if isinstance(p, ProjPoint) else p
        if not self.basis:
            return False
        if self.exact and la.is_exact(v):
            return la.rank(list(self.basis) + [la.exact_vec(v)]) == len(self.basis)
        return distance_to_subspace(v, self) <= tol * 100

    def contains_subspace(self, other: "ProjSubspace", tol: float = TAU) -> bool:
        return all(self.contains(v, tol) for v in other.basis)

    def equals(self, other: "ProjSubspace", tol: float = TAU) -> bool:
        return (self.ambient == other.ambient and self.proj_dim == other.proj_dim
                and self.contains_subspace(other, tol) and other.contains_subspace(self, tol))

    def __eq__(self, other):
        return isinstance(other, ProjSubspace) and self.equals(other)

    __hash__ = None

    def coefficients(self):
        """Coefficient vector c with sum c_i x_i = 0 on a hyperplane."""
        if self.proj_dim != self.ambient - 1:
            raise InputError("not a hyperplane")
        ns = la.nullspace(self.basis)
        c = ns[0]
        return la.canonical_lift(c)

    def sample(self, k: int, rng) -> list:
        """k random points, returned as float lifts."""
        B = np.array([la.float_vec(b) for b in self.basis])
        coeffs = rng.normal(size=(k, len(B))) + 1j * rng.normal(size=(k, len(B)))
        return list(coeffs @ B)

    def to_float(self) -> "ProjSubspace":
        if not self.exact:
            return self
        return ProjSubspace([la.float_vec(b) for b in self.basis], self.ambient)

    def __repr__(self):
        return f"ProjSubspace(dim={self.proj_dim}, basis={[list(b) for b in self.basis]})"


def span(*items, ambient: int | None = None) -> ProjSubspace:
    vecs = []
    for it in items:
        if isinstance(it, ProjPoint):
            vecs.append(it.lift)
        elif isinstance(it, ProjSubspace):
            vecs.extend(it.basis)
            ambient = it.ambient
        else:
            vecs.append(it)
    if vecs and any(la.is_exact(v) for v in vecs) and not all(la.is_exact(v) for v in vecs):
        vecs = [la.float_vec(v) for v in vecs]
    return ProjSubspace(vecs, ambient)


def empty_subspace(n: int) -> ProjSubspace:
    return ProjSubspace([], ambient=n)


def coordinate_subspace(indices, n: int, exact: bool = True) -> ProjSubspace:
    """<e_i : i in indices> with 1-based indices."""
    return ProjSubspace([basis_point(i, n, exact).lift for i in indices], ambient=n)


def hyperplane(coeffs) -> ProjSubspace:
    """The hyperplane {sum c_i x_i = 0}."""
    c = la.exact_vec(coeffs) if la.is_exact(coeffs) else np.asarray(coeffs, dtype=complex)
    return ProjSubspace(la.nullspace([c]), ambient=len(c) - 1)


def distance_to_subspace(v, s: ProjSubspace) -> float:
    """Sine of the angle between the line [v] and the subspace s."""
    v = la.float_vec(v)
    v = v / np.linalg.norm(v)
    if not s.basis:
        return 1.0
    B = np.array([la.float_vec(b) for b in s.basis]).T
    q, _ = np.linalg.qr(B)
    r = v - q @ (q.conj().T @ v)
    return float(np.linalg.norm(r))


def fs_distance(u, v) -> float:
    """Fubini-Study distance in [0, pi/2]."""
    u, v = la.float_vec(u), la.float_vec(v)
    u, v = u / np.linalg.norm(u), v / np.linalg.norm(v)
    c = np.vdot(u, v)
    # atan2 keeps full precision near zero, where arccos loses half the digits
    return float(np.arctan2(np.linalg.norm(v - c * u), abs(c)))


def line_through(p: ProjPoint, q: ProjPoint) -> ProjSubspace:
    if p.equals(q):
        raise IdenticalPoints("points coincide")
    return span(p, q)


def intersect(s1: ProjSubspace, s2: ProjSubspace, tol: float = TAU) -> ProjSubspace:
    """Intersection of two projective subspaces."""
    n = s1.ambient
    if not s1.basis or not s2.basis:
        return empty_subspace(n)
    exact = s1.exact and s2.exact
    b1 = s1.basis if exact else [la.float_vec(b) for b in s1.basis]
    b2 = s2.basis if exact else [la.float_vec(b) for b in s2.basis]
    # solve sum a_i b1_i - sum c_j b2_j = 0
    cols = list(b1) + [tuple(-x for x in b) if exact else -b for b in b2]
    M = la.transpose(cols) if exact else np.array(cols).T
    ns = la.nullspace(M, tol)
    k = len(b1)
    vecs = []
    for c in ns:
        if exact:
            v = tuple(sum((c[i] * b1[i][t] for i in range(k)), Surd(0)) for t in range(n + 1))
        else:
            v = sum(c[i] * b1[i] for i in range(k))
        if not la.is_zero_vec(v):
            vecs.append(v)
    return ProjSubspace(vecs, ambient=n, tol=tol) if vecs else empty_subspace(n)


def intersect_lines(l1: ProjSubspace, l2: ProjSubspace) -> ProjPoint:
    if l1.proj_dim != 1 or l2.proj_dim != 1:
        raise InputError("both arguments must be lines")
    if l1.equals(l2):
        raise SameLine("lines coincide")
    s = intersect(l1, l2)
    return ProjPoint(s.basis[0])


def line_coefficients(l: ProjSubspace):
    """Dual coordinates of a line in CP^2 (equivalently any hyperplane)."""
    return l.coefficients()


def is_general_position(lines) -> bool:
    """No three lines concurrent and no two equal (lines in CP^2)."""
    cs = [line_coefficients(l) for l in lines]
    exact = all(la.is_exact(c) for c in cs)
    if not exact:
        cs = [la.float_vec(c) for c in cs]
    for a, b in combinations(cs, 2):
        if la.proportional(a, b):
            return False
    for a, b, c in combinations(cs, 3):
        if la.rank([a, b, c]) < 3:
            return False
    return True


class ProjMap:
    """Element of PSL(n+1, C).

    Float matrices are scaled to determinant 1 with the principal root.
    Exact matrices are scaled so that the first nonzero entry is 1, since the
    root of the determinant may leave the exact field.
    """

    __slots__ = ("matrix",)

    def __init__(self, M, normalize: bool = True):
        exact = la.is_exact(M)
        M = la.exact_mat(M) if exact else np.array(M, dtype=complex)
        d = la.det(M)
        if (exact and d.is_zero()) or (not exact and abs(d) <= 1e-300):
            raise SingularMatrix("determinant vanishes")
        if normalize:
            if exact:
                flat = [x for r in M for x in r]
                f = next(x for x in flat if not x.is_zero()).inverse()
                M = la.scale(M, f)
            else:
                n1 = M.shape[0]
                M = M / (complex(d) ** (1.0 / n1))
        if not exact:
            M.setflags(write=False)
        self.matrix = M

    @property
    def n(self) -> int:
        return len(self.matrix) - 1

    @property
    def exact(self) -> bool:
        return la.is_exact(self.matrix)

    def float_matrix(self) -> np.ndarray:
        return la.float_mat(self.matrix)

    def sl_matrix(self) -> np.ndarray:
        """Float lift with determinant 1."""
        M = self.float_matrix()
        return M / (np.linalg.det(M) ** (1.0 / M.shape[0]))

    def to_float(self) -> "ProjMap":
        return ProjMap(self.float_matrix())

    def __matmul__(self, other: "ProjMap") -> "ProjMap":
        return ProjMap(la.matmul(self.matrix, other.matrix))

    def inverse(self) -> "ProjMap":
        return ProjMap(la.inv(self.matrix))

    def __pow__(self, k: int) -> "ProjMap":
        if k < 0:
            return self.inverse() ** (-k)
        out, base = identity_map(self.n, self.exact), self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def apply(self, p):
        """Image of a point (returns ProjPoint) or subspace (returns ProjSubspace)."""
        if isinstance(p, ProjSubspace):
            return ProjSubspace([la.matvec(self.matrix, b) for b in p.basis], p.ambient)
        if isinstance(p, ProjPoint):
            return ProjPoint(la.matvec(self.matrix, p.lift))
        return ProjPoint(la.matvec(self.matrix, p))

    def equals(self, other: "ProjMap", tol: float = TAU) -> bool:
        if self.exact and other.exact:
            return self.matrix == other.matrix
        return proj_distance(self.float_matrix(), other.float_matrix()) <= tol

    def __eq__(self, other):
        return isinstance(other, ProjMap) and self.equals(other)

    __hash__ = None

    def __repr__(self):
        return f"ProjMap({[list(r) for r in self.matrix]})"


def identity_map(n: int, exact: bool = True) -> ProjMap:
    return ProjMap(la.identity(n + 1, exact))


def proj_distance(A, B) -> float:
    """min_c ||A - cB|| / ||A||, the distance between matrices up to scalar."""
    A, B = la.float_mat(A), la.float_mat(B)
    a, b = A.ravel(), B.ravel()
    bb = np.vdot(b, b).real
    if bb == 0:
        return 1.0
    c = np.vdot(b, a) / bb
    return float(np.linalg.norm(a - c * b) / np.linalg.norm(a))


class QuasiProjMap:
    """A nonzero matrix up to scale, possibly singular."""

    __slots__ = ("matrix", "kernel", "image")

    def __init__(self, M, tol: float = TAU):
        exact = la.is_exact(M)
        M = la.exact_mat(M) if exact else np.array(M, dtype=complex)
        n = len(M) - 1
        if exact:
            flat = [x for r in M for x in r]
            if all(x.is_zero() for x in flat):
                raise ZeroMatrix("zero matrix")
            # first entry of maximal modulus becomes 1
            mods = [x.abs2() for x in flat]
            best = 0
            for i, m in enumerate(mods):
                if m > mods[best]:
                    best = i
            M = la.scale(M, flat[best].inverse())
        else:
            a = np.abs(M)
            if a.max() == 0:
                raise ZeroMatrix("zero matrix")
            M[a <= tol * a.max()] = 0
            k = int(np.argmax(np.abs(M).ravel() >= np.abs(M).max() * (1 - 1e-12)))
            M = M / M.ravel()[k]
            M.setflags(write=False)
        self.matrix = M
        ker = la.nullspace(M, tol)
        self.kernel = ProjSubspace(ker, ambient=n, tol=tol) if ker else empty_subspace(n)
        self.image = ProjSubspace(la.colspace(M, tol), ambient=n, tol=tol)

    @property
    def n(self) -> int:
        return len(self.matrix) - 1

    @property
    def rank(self) -> int:
        return self.image.proj_dim + 1

    def float_matrix(self) -> np.ndarray:
        return la.float_mat(self.matrix)

    def equals(self, other: "QuasiProjMap", tol: float = TAU) -> bool:
        return proj_distance(self.float_matrix(), other.float_matrix()) <= tol

    def __repr__(self):
        return f"QuasiProjMap({[list(r) for r in self.matrix]})"


def qp_from_matrix(M, tol: float = TAU) -> QuasiProjMap:
    return QuasiProjMap(M, tol)


def dual_action(g: ProjMap, l: ProjSubspace) -> ProjSubspace:
    """Image of a hyperplane computed on its coefficient vector."""
    c = l.coefficients()
    ginvT = la.transpose(la.inv(g.matrix))
    if la.is_exact(ginvT) != la.is_exact(c):
        ginvT, c = la.float_mat(ginvT), la.float_vec(c)
    return hyperplane(la.matvec(ginvT, c))


def plucker(s: ProjSubspace) -> ProjPoint:
    """Wedge of the basis, coordinates ordered by lexicographic column subsets."""
    k = len(s.basis)
    B = s.basis
    m = len(B[0])
    coords = []
    for cols in combinations(range(m), k):
        sub = [[B[i][c] for c in cols] for i in range(k)]
        coords.append(la.det(sub) if s.exact else la.det(np.array(sub)))
    if s.exact:
        return ProjPoint(tuple(coords))
    return ProjPoint(np.array(coords, dtype=complex))


def _frame_matrix(pts, exact):
    n1 = len(pts[0].lift)
    lifts = [p.lift if exact else la.float_vec(p.lift) for p in pts]
    for sub in combinations(range(len(lifts)), n1):
        if la.rank([lifts[i] for i in sub]) < n1:
            raise DegenerateConfiguration("points not in general position")
    F = la.transpose(lifts[:n1])
    if not exact:
        F = np.array(F)
    coef = la.matvec(la.inv(F), lifts[n1])
    D = [[F[i][j] * coef[j] for j in range(n1)] for i in range(n1)]
    return la.exact_mat(D) if exact else np.array(D)


def transform_from_point_correspondence(src, dst) -> ProjMap:
    """Unique g with g(src_i) = dst_i for n+2 points in general position."""
    exact = all(p.exact for p in list(src) + list(dst))
    if len(src) != len(src[0].lift) + 1 or len(dst) != len(src):
        raise InputError("need n+2 points")
    Ds = _frame_matrix(src, exact)
    Dd = _frame_matrix(dst, exact)
    return ProjMap(la.matmul(Dd, la.inv(Ds)))


def _quad_points(lines):
    l1, l2, l3, l4 = lines
    return [intersect_lines(l1, l3), intersect_lines(l2, l3),
            intersect_lines(l2, l4), intersect_lines(l1, l4)]


def transform_from_line_correspondence(src, dst) -> ProjMap:
    """Unique g with g(src_i) = dst_i for four lines in general position in CP^2."""
    if not is_general_position(src) or not is_general_position(dst):
        raise NotGeneralPosition("lines not in general position")
    return transform_from_point_correspondence(_quad_points(src), _quad_points(dst))


class HermitianForm:
    """Hermitian form of signature (1, n): corner antidiagonal 1s, identity inside."""

    __slots__ = ("matrix",)

    def __init__(self, M=None, n: int | None = None):
        if M is None:
            M = corner_form_matrix(n)
        exact = la.is_exact(M)
        M = la.exact_mat(M) if exact else np.array(M, dtype=complex)
        F = la.float_mat(M)
        if not np.allclose(F, F.conj().T, atol=1e-12):
            raise SignatureError("form is not Hermitian")
        ev = np.linalg.eigvalsh(F)
        scale_ = max(1.0, np.abs(ev).max())
        neg = int(np.sum(ev < -1e-12 * scale_))
        pos = int(np.sum(ev > 1e-12 * scale_))
        if neg != 1 or pos != len(ev) - 1:
            raise SignatureError(f"signature ({neg},{pos}) is not (1,{len(ev) - 1})")
        self.matrix = M

    @property
    def n(self) -> int:
        return len(self.matrix) - 1

    def __call__(self, v, w):
        """<v, w> = w^* H v."""
        H = la.float_mat(self.matrix)
        return complex(np.vdot(la.float_vec(w), H @ la.float_vec(v)))

    def exact_value(self, v, w):
        Hv = la.matvec(self.matrix, v)
        return sum((x * y.conjugate() for x, y in zip(Hv, la.exact_vec(w))), Surd(0))


def corner_form_matrix(n: int, exact: bool = True):
    M = [[0] * (n + 1) for _ in range(n + 1)]
    M[0][n] = M[n][0] = 1
    for i in range(1, n):
        M[i][i] = 1
    return la.exact_mat(M) if exact else np.array(M, dtype=complex)


def polar_hyperplane(p: ProjPoint, form: HermitianForm) -> ProjSubspace:
    """p^perp = {[w] : <w, p> = 0}; coefficients are H conj(p)."""
    if form.n != p.n:
        raise InputError("dimension mismatch")
    if p.exact and la.is_exact(form.matrix):
        pc = tuple(x.conjugate() for x in p.lift)
        c = la.matvec(la.transpose(form.matrix), pc)
    else:
        H = la.float_mat(form.matrix)
        c = H.T @ la.float_vec(p.lift).conj()
    return hyperplane(c)
