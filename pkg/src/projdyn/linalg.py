"""Linear algebra over two backends.

Float matrices are complex128 numpy arrays. Exact matrices are tuples of
tuples of ``Surd``. Every function here accepts either and dispatches on
the element type.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import InputError, SingularMatrix
from .scalars import TAU, Surd


def is_exact(M) -> bool:
    if isinstance(M, np.ndarray):
        return False
    first = M[0]
    if isinstance(first, (tuple, list)):
        first = first[0]
    return isinstance(first, (Surd, int, Fraction))


def exact_vec(v) -> tuple:
    return tuple(Surd.coerce(x) for x in v)


def exact_mat(rows) -> tuple:
    return tuple(exact_vec(r) for r in rows)


def float_vec(v) -> np.ndarray:
    return np.array([complex(x) for x in v], dtype=complex)


def float_mat(rows) -> np.ndarray:
    if isinstance(rows, np.ndarray):
        return rows.astype(complex)
    return np.array([[complex(x) for x in r] for r in rows], dtype=complex)


def as_backend(M, exact: bool):
    return exact_mat(M) if exact else float_mat(M)


def shape(M):
    return len(M), len(M[0])


def identity(n: int, exact: bool = False):
    if exact:
        return tuple(tuple(Surd(int(i == j)) for j in range(n)) for i in range(n))
    return np.eye(n, dtype=complex)


def matmul(A, B):
    if not is_exact(A) and not is_exact(B):
        return np.asarray(A) @ np.asarray(B)
    A, B = exact_mat(A), exact_mat(B)
    n, k = shape(A)
    m = len(B[0])
    return tuple(
        tuple(sum((A[i][t] * B[t][j] for t in range(k)), Surd(0)) for j in range(m))
        for i in range(n)
    )


def matvec(A, v):
    if not is_exact(A) and not is_exact(v):
        return np.asarray(A) @ np.asarray(v)
    A, v = exact_mat(A), exact_vec(v)
    return tuple(sum((A[i][t] * v[t] for t in range(len(v))), Surd(0)) for i in range(len(A)))


def transpose(A):
    if not is_exact(A):
        return np.asarray(A).T
    return tuple(zip(*A))


def conj_transpose(A):
    if not is_exact(A):
        return np.asarray(A).conj().T
    return tuple(tuple(x.conjugate() for x in col) for col in zip(*A))


def scale(A, c):
    if not is_exact(A):
        return np.asarray(A) * complex(c)
    return tuple(tuple(x * c for x in r) for r in A)


def _exact_rref(rows):
    R = [list(r) for r in rows]
    if not R:
        return [], []
    n, m = len(R), len(R[0])
    piv, r = [], 0
    for c in range(m):
        p = next((i for i in range(r, n) if not R[i][c].is_zero()), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = R[r][c].inverse()
        R[r] = [x * inv for x in R[r]]
        for i in range(n):
            if i != r and not R[i][c].is_zero():
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        piv.append(c)
        r += 1
        if r == n:
            break
    return [tuple(x) for x in R[:r]], piv


def _float_rref(rows, tol):
    R = np.array(rows, dtype=complex, copy=True)
    if R.size == 0:
        return R.reshape(0, R.shape[1] if R.ndim == 2 else 0), []
    n, m = R.shape
    thresh = tol * max(1.0, np.abs(R).max())
    piv, r = [], 0
    for c in range(m):
        p = r + int(np.argmax(np.abs(R[r:, c])))
        if abs(R[p, c]) <= thresh:
            R[r:, c] = 0
            continue
        R[[r, p]] = R[[p, r]]
        R[r] = R[r] / R[r, c]
        for i in range(n):
            if i != r:
                R[i] = R[i] - R[i, c] * R[r]
        R[:, c] = 0
        R[r, c] = 1
        piv.append(c)
        r += 1
        if r == n:
            break
    return R[:r], piv


def rref(rows, tol: float = TAU):
    """Reduced row echelon form and pivot columns."""
    if is_exact(rows):
        return _exact_rref(exact_mat(rows))
    return _float_rref(rows, tol)


def rank(M, tol: float = TAU) -> int:
    if len(M) == 0:
        return 0
    if is_exact(M):
        return len(_exact_rref(exact_mat(M))[1])
    A = np.asarray(M, dtype=complex)
    s = np.linalg.svd(A, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def nullspace(M, tol: float = TAU):
    """Basis of the null space as a list of vectors."""
    if is_exact(M):
        M = exact_mat(M)
        m = len(M[0])
        R, piv = _exact_rref(M)
        free = [c for c in range(m) if c not in piv]
        basis = []
        for f in free:
            v = [Surd(0)] * m
            v[f] = Surd(1)
            for row, p in zip(R, piv):
                v[p] = -row[f]
            basis.append(tuple(v))
        return basis
    A = np.asarray(M, dtype=complex)
    u, s, vh = np.linalg.svd(A)
    r = int(np.sum(s > tol * s[0])) if s.size and s[0] > 0 else 0
    return [vh[i].conj() for i in range(r, A.shape[1])]


def colspace(M, tol: float = TAU):
    if is_exact(M):
        R, _ = _exact_rref(transpose(exact_mat(M)))
        return list(R)
    A = np.asarray(M, dtype=complex)
    u, s, vh = np.linalg.svd(A)
    r = int(np.sum(s > tol * s[0])) if s.size and s[0] > 0 else 0
    return [u[:, i] for i in range(r)]


def canonical_span(vectors, tol: float = TAU):
    """Canonical basis (RREF rows) of the span of ``vectors``."""
    if not len(vectors):
        return []
    if is_exact(vectors):
        R, _ = _exact_rref(exact_mat(vectors))
        return list(R)
    A = np.array(vectors, dtype=complex)
    u, s, vh = np.linalg.svd(A, full_matrices=False)
    if s[0] == 0:
        return []
    r = int(np.sum(s > tol * s[0]))
    R, _ = _float_rref(vh[:r], tol)
    return [R[i] for i in range(R.shape[0])]


def det(M):
    if not is_exact(M):
        return complex(np.linalg.det(np.asarray(M, dtype=complex)))
    A = [list(r) for r in exact_mat(M)]
    n = len(A)
    out = Surd(1)
    for c in range(n):
        p = next((i for i in range(c, n) if not A[i][c].is_zero()), None)
        if p is None:
            return Surd(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            out = -out
        out = out * A[c][c]
        inv = A[c][c].inverse()
        for i in range(c + 1, n):
            if not A[i][c].is_zero():
                f = A[i][c] * inv
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return out


def inv(M):
    if not is_exact(M):
        A = np.asarray(M, dtype=complex)
        return np.linalg.inv(A)
    A = exact_mat(M)
    n = len(A)
    aug = [tuple(A[i]) + tuple(Surd(int(i == j)) for j in range(n)) for i in range(n)]
    R, piv = _exact_rref(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise SingularMatrix("matrix is not invertible")
    return tuple(tuple(R[i][n:]) for i in range(n))


def is_zero_vec(v, tol: float = TAU) -> bool:
    if is_exact(v):
        return all(Surd.coerce(x).is_zero() for x in v)
    return float(np.max(np.abs(np.asarray(v)))) == 0.0


def proportional(u, v, tol: float = TAU) -> bool:
    """True iff u and v span the same line through the origin."""
    if is_exact(u) or is_exact(v):
        if not (is_exact(u) and is_exact(v)):
            u, v = float_vec(u), float_vec(v)
            return proportional(u, v, tol)
        return rank([u, v]) == 1
    return rank(np.array([u, v]), tol) == 1


def canonical_lift(v, tol: float = TAU):
    """Scale so the first nonzero coordinate equals 1."""
    if is_exact(v):
        v = exact_vec(v)
        k = next((i for i, x in enumerate(v) if not x.is_zero()), None)
        if k is None:
            raise InputError("zero vector")
        inv_ = v[k].inverse()
        return tuple(x * inv_ for x in v)
    v = np.asarray(v, dtype=complex)
    m = np.abs(v).max()
    if m == 0:
        raise InputError("zero vector")
    k = int(np.argmax(np.abs(v) > tol * m))
    out = v / v[k]
    out[np.abs(out) <= tol * np.abs(out).max()] = 0
    return out


def frob(M) -> float:
    return float(np.linalg.norm(float_mat(M)))
