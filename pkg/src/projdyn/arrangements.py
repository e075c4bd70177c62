"""Four affine lines in general position in C^2, plus the line at infinity.

Lines are stored by their dual coordinates (a, b, c), meaning a x + b y + c w = 0
in homogeneous coordinates [x : y : w].  Exact mode works over Q(i, sqrt 2);
float mode uses complex numbers with a relative tolerance.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import linalg as la
from .errors import ForbiddenEta, InputError, NotGeneralPosition, NotInP, PointOnH
from .proj import ProjMap, dual_action, hyperplane, is_general_position, \
    transform_from_line_correspondence
from .scalars import Surd

FLOAT_TOL = 1e-9


class _Infinity:
    """The point at infinity of the eta sphere."""
    __slots__ = ()

    def __repr__(self):
        return "INF"


INF = _Infinity()


def _sc(x):
    if isinstance(x, (Surd, complex, float)):
        return x
    if isinstance(x, (int, Fraction, str)):
        return Surd(Fraction(x))
    if isinstance(x, np.generic):
        return complex(x)
    raise InputError(f"not a scalar: {x!r}")


def _unify(*xs):
    """All Surd, or all complex if any input is a float."""
    xs = [_sc(x) for x in xs]
    if any(not isinstance(x, Surd) for x in xs):
        return [complex(x) for x in xs]
    return xs


def _zero(x, scale: float = 1.0) -> bool:
    if isinstance(x, Surd):
        return x.is_zero()
    return abs(x) <= FLOAT_TOL * max(1.0, scale)


def _eq(x, y) -> bool:
    if isinstance(x, Surd) and isinstance(y, Surd):
        return x == y
    x, y = complex(x), complex(y)
    return abs(x - y) <= FLOAT_TOL * max(1.0, abs(x), abs(y))


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _is_null(u) -> bool:
    scale = max(abs(complex(x)) for x in u)
    return all(_zero(x, scale) for x in u)


def _same_point(u, v) -> bool:
    """Projective equality of two homogeneous vectors."""
    c = _cross(u, v)
    scale = max(abs(complex(x)) for x in u) * max(abs(complex(x)) for x in v)
    return all(_zero(x, scale) for x in c)


# parameter space

@dataclass(frozen=True)
class ArrangementParam:
    """Upsilon = (zeta1, zeta2): l3 meets l0 at (zeta1, 0) and l2 at (0, zeta2)."""
    zeta1: object
    zeta2: object

    def __post_init__(self):
        z1, z2 = _unify(self.zeta1, self.zeta2)
        object.__setattr__(self, "zeta1", z1)
        object.__setattr__(self, "zeta2", z2)

    @property
    def exact(self) -> bool:
        return isinstance(self.zeta1, Surd)

    def check(self) -> "ArrangementParam":
        if not in_parameter_space(self.zeta1, self.zeta2):
            raise NotInP(f"({self.zeta1}, {self.zeta2}) outside P")
        return self


def in_parameter_space(zeta1, zeta2) -> bool:
    z1, z2 = _unify(zeta1, zeta2)
    if _zero(z1) or _eq(z1, 1):
        return False
    return not (_zero(z2) or _eq(z2, 1) or _eq(z2, z1))


def sqrt2() -> Surd:
    return Surd.sqrt(2)


def alpha0() -> Surd:
    """Radius and center coordinate of the ball tangent to l0, l1, l2."""
    s = sqrt2()
    return (s * (1 + s)).inverse()


def tangent_forbidden_set() -> list:
    s = sqrt2()
    return [Surd(0), Surd(1), alpha0(), 3 - 2 * s, 2 - s]


def line_coeffs(param: ArrangementParam) -> list:
    """Dual coordinates of l0, l1, l2, l3, l4."""
    z1, z2 = param.zeta1, param.zeta2
    one = Surd(1) if param.exact else 1 + 0j
    zero = one * 0
    return [(zero, one, zero), (one, one, -one), (one, zero, zero),
            (z2, z1, -z1 * z2), (zero, zero, one)]


def standard_lines(param: ArrangementParam) -> list:
    return [hyperplane(list(c)) for c in line_coeffs(param)]


def _affine(P):
    """Affine coordinates of a homogeneous point, or the point itself at infinity."""
    if _zero(P[2], max(abs(complex(x)) for x in P)):
        return ("inf",) + tuple(P[:2])
    return (P[0] / P[2], P[1] / P[2])


def intersections_q(param: ArrangementParam) -> dict:
    """q_{i,j} = l_i meet l_j as homogeneous vectors, keyed by (i, j)."""
    return dict(_q_cached(param))


@lru_cache(maxsize=256)
def _q_cached(param: ArrangementParam) -> tuple:
    param.check()
    L = line_coeffs(param)
    q = {}
    for i in range(5):
        for j in range(i + 1, 5):
            P = _cross(L[i], L[j])
            if not _zero(P[2], max(abs(complex(x)) for x in P)):
                P = tuple(x / P[2] for x in P)
            else:
                k = next(t for t in range(3) if not _zero(P[t]))
                P = tuple(x / P[k] for x in P)
            q[(i, j)] = P
    return tuple(q.items())


def q_closed_forms(param: ArrangementParam) -> dict:
    """The q table written out in closed form (affine points have w = 1)."""
    z1, z2 = param.zeta1, param.zeta2
    one = Surd(1) if param.exact else 1 + 0j
    zero = one * 0
    d = z1 - z2
    return {(0, 1): (one, zero, one), (0, 2): (zero, zero, one), (0, 3): (z1, zero, one),
            (0, 4): (one, zero, zero), (1, 2): (zero, one, one),
            (1, 3): (z1 * (1 - z2) / d, z2 * (z1 - 1) / d, one),
            (1, 4): (-one, one, zero), (2, 3): (zero, z2, one), (2, 4): (zero, one, zero),
            (3, 4): (-z1, z2, zero)}


# special lines and the eta slice

def _zpt(z):
    z1, z2 = z
    one = Surd(1) if isinstance(z1, Surd) else 1 + 0j
    return (z1, z2, one)


def special_lines(param: ArrangementParam) -> dict:
    """H_{i,j,k,m}: lines through q_{i,j} and q_{k,m} for disjoint pairs."""
    return dict(_h_cached(param))


@lru_cache(maxsize=256)
def _h_cached(param: ArrangementParam) -> tuple:
    q = intersections_q(param)
    keys = sorted(q)
    out = {}
    for a, (i, j) in enumerate(keys):
        for (k, m) in keys[a + 1:]:
            if len({i, j, k, m}) == 4:
                out[(i, j, k, m)] = _cross(q[(i, j)], q[(k, m)])
    return tuple(out.items())


def check_point(param: ArrangementParam, z) -> tuple:
    """z coerced to the param's mode; raises PointOnH if z is on an l_i or an H line."""
    z = tuple(_unify(param.zeta1, *z)[1:]) if param.exact else tuple(complex(x) for x in z)
    return _check_cached(param, z)


@lru_cache(maxsize=1024)
def _check_cached(param: ArrangementParam, z: tuple) -> tuple:
    Z = _zpt(z)
    for i, c in enumerate(line_coeffs(param)[:4]):
        if _zero(_dot(c, Z), 1.0):
            raise PointOnH(f"z lies on l{i}")
    for key, c in special_lines(param).items():
        if _zero(_dot(c, Z), max(abs(complex(x)) for x in c)):
            raise PointOnH(f"z lies on H{key}")
    return z


def eta_line(z, eta):
    """L_eta through z and (eta, 0); eta = INF gives the line through z parallel to l0."""
    Z = _zpt(z)
    E = (Z[2], Z[2] * 0, Z[2] * 0) if eta is INF else (eta, Z[2] * 0, Z[2])
    return _cross(Z, E)


def forbidden_eta(param: ArrangementParam, z) -> list:
    """The nine finite eta with L_eta through some q_{i,j}, in the order L01..L34.

    The L23 entry is zeta2 z1 / (zeta2 - z2): the line through (0, zeta2) and z
    meets y = 0 there.
    """
    param.check()
    z1, z2 = check_point(param, z)
    a, b = param.zeta1, param.zeta2
    return [1 + 0 * a, 0 * a, a, z1 / (1 - z2),
            (b * z1 + a * z2 - a * b * (z1 + z2)) / (b * (1 - a) + z2 * (a - b)),
            z1 + z2, b * z1 / (b - z2), z1, (b * z1 + a * z2) / b]


FORBIDDEN_LABELS = ["L01", "L02", "L03", "L12", "L13", "L14", "L23", "L24", "L34"]


def slice_intersections(param: ArrangementParam, z, eta) -> list:
    """L_eta meet l_i for i = 0..4 as homogeneous vectors."""
    L = eta_line(z, eta)
    return [_cross(L, c) for c in line_coeffs(param)]


def intersection_count(param: ArrangementParam, z, eta) -> int:
    """Number of distinct points of L_eta on l0..l4, by pairwise coincidence."""
    param.check()
    z = check_point(param, z)
    if eta is not INF:
        eta = _unify(param.zeta1, eta)[1] if param.exact else complex(eta)
    pts = slice_intersections(param, z, eta)
    if any(_is_null(P) for P in pts):
        raise PointOnH("L_eta coincides with an arrangement line")
    distinct = []
    for P in pts:
        if not any(_same_point(P, Q) for Q in distinct):
            distinct.append(P)
    return len(distinct)


def h_eta(z, eta, xi):
    z1, z2 = z
    return (z1 + xi * (eta - z1), (1 - xi) * z2)


@dataclass
class SliceGeometry:
    z: tuple
    eta: object
    P: list        # affine points L_eta meet l_i, i = 0..3
    p: list        # parameters with h_eta(p_i) = P_i


def slice_points(param: ArrangementParam, z, eta) -> SliceGeometry:
    param.check()
    z = check_point(param, z)
    if eta is INF:
        raise ForbiddenEta("eta = infinity gives L04")
    eta = _unify(param.zeta1, eta)[1] if param.exact else complex(eta)
    if any(_eq(eta, c) for c in forbidden_eta(param, z)):
        raise ForbiddenEta(f"eta = {eta} lies in C0")
    z1, z2 = z
    a, b = param.zeta1, param.zeta2
    den1 = z1 + z2 - eta
    den3 = z2 * a + (z1 - eta) * b
    P = [(eta, 0 * eta),
         ((z1 + eta * (z2 - 1)) / den1, (1 - eta) * z2 / den1),
         (0 * eta, eta * z2 / (eta - z1)),
         (a * (eta * (z2 - b) + z1 * b) / den3, z2 * b * (a - eta) / den3)]
    p = [1 + 0 * eta, (z1 + z2 - 1) / den1, z1 / (z1 - eta), (z2 * a + b * (z1 - a)) / den3]
    return SliceGeometry(z, eta, P, p)


def slice_residuals(param: ArrangementParam, geom: SliceGeometry) -> list:
    """For each i: |h(p_i) - P_i| plus |l_i(P_i)| (both exactly 0 in exact mode)."""
    L = line_coeffs(param)
    out = []
    for i in range(4):
        h = h_eta(geom.z, geom.eta, geom.p[i])
        P = geom.P[i]
        one = 1 + 0 * P[0]
        r = [h[0] - P[0], h[1] - P[1], _dot(L[i], (P[0], P[1], one))]
        if all(isinstance(x, Surd) for x in r):
            out.append(0.0 if all(x.is_zero() for x in r) else max(abs(complex(x)) for x in r))
        else:
            out.append(max(abs(complex(x)) for x in r))
    return out


# tangency to the ball |z1 - a0|^2 + |z2 - a0|^2 = a0^2

def sphere_point(u1, u2):
    """center + a0 (u1, u2) for a unit vector (u1, u2)."""
    u1, u2 = _sc(u1), _sc(u2)
    a = alpha0()
    return (a + a * u1, a + a * u2)


def random_unit_gaussian(rng: random.Random, bound: int = 20):
    """Exact unit vector in Q(i)^2 by inverse stereographic projection of a rational point."""
    x = [Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(3)]
    S = sum(t * t for t in x)
    c = [2 * t / (S + 1) for t in x] + [(S - 1) / (S + 1)]
    return Surd(c[0], c[1]), Surd(c[2], c[3])


def tangent_line(p) -> tuple:
    """Complex tangent line to the sphere at p: sum (z_i - p_i) conj(n_i) = 0."""
    a = alpha0()
    n1, n2 = p[0] - a, p[1] - a
    c1, c2 = n1.conjugate(), n2.conjugate()
    return (c1, c2, -(p[0] * c1 + p[1] * c2))


def tangency_discriminant(line, p) -> Surd:
    """|<v, p - c>|^2 - |v|^2 (|p - c|^2 - r^2) for the direction v of the line; 0 iff tangent."""
    a = alpha0()
    v = (line[1], -line[0])
    w = (p[0] - a, p[1] - a)
    ip = v[0] * w[0].conjugate() + v[1] * w[1].conjugate()
    vv = v[0].abs2() + v[1].abs2()
    ww = w[0].abs2() + w[1].abs2() - a * a
    return ip.abs2() - vv * ww


def tangent_param(p) -> dict:
    """xi = tangent line meet l0 and phi(xi) = its meet with l2, for a sphere point p."""
    line = tangent_line(p)
    out = {"line": line, "discriminant": tangency_discriminant(line, p)}
    c1, c2, c0 = line
    if c1.is_zero() and c0.is_zero():
        out["xi"] = p[0]          # the tangent line is l0 itself, touching at (alpha0, 0)
    else:
        out["xi"] = INF if c1.is_zero() else -c0 / c1
    out["phi"] = INF if c2.is_zero() else -c0 / c2
    return out


def xi_formula(p) -> Surd:
    """The closed-form xi printed for the tangent line (conjugated numerator); undefined at conj(z1) = a0."""
    a = alpha0()
    z1, z2 = p
    if (a - z1.conjugate()).is_zero():
        raise InputError("xi formula undefined when conj(z1) = alpha0")
    return (a * z1.conjugate() + a * z2.conjugate() - (z1.abs2() + z2.abs2())) / (a - z1.conjugate())


def special_tangency_points() -> dict:
    """Sphere points whose tangent line fails general position, keyed by the xi they produce."""
    a, s = alpha0(), sqrt2()
    t = (3 - 2 * s) / 2
    half = Surd(Fraction(1, 2))
    return {"alpha0": (a, Surd(0)), "1": (half, half), "0": (Surd(0), a),
            "inf": (a, 2 * a), "3-2sqrt2": (t, t), "2-sqrt2": (2 * a, a)}


# normalization

def normalize_arrangement(lines, infinity=None):
    """Projective g sending lines[0..2] to l0, l1, l2 and `infinity` to l4.

    Returns (g, param) where g(lines[3]) = l3 for param.  With the default
    infinity = {w = 0}, g is affine.
    """
    lines = list(lines)
    if len(lines) != 4:
        raise InputError("need four lines")
    exact = all(l.exact for l in lines)
    if infinity is None:
        infinity = hyperplane([0, 0, 1] if exact else np.array([0, 0, 1], dtype=complex))
    if not is_general_position(lines + [infinity]):
        raise NotGeneralPosition("lines are not in general position")
    one = Surd(1) if exact else 1 + 0j
    std = [hyperplane([0 * one, one, 0 * one]), hyperplane([one, one, -one]),
           hyperplane([one, 0 * one, 0 * one]), hyperplane([0 * one, 0 * one, one])]
    g = transform_from_line_correspondence(lines[:3] + [infinity], std)
    l3 = dual_action(g, lines[3])
    a, b, c = la.canonical_lift(l3.coefficients()) if exact else tuple(l3.coefficients())
    # a x + b y + c = 0 meets y = 0 at x = -c/a and x = 0 at y = -c/b
    if _zero(a) or _zero(b) or _zero(c):
        raise NotGeneralPosition("fourth line passes through a vertex or is parallel to a side")
    param = ArrangementParam(-c / a, -c / b)
    if not in_parameter_space(param.zeta1, param.zeta2):
        raise NotGeneralPosition("normalized parameter outside P")
    return g, param


def apply_lines(g: ProjMap, lines) -> list:
    return [dual_action(g, l) for l in lines]


# drawing

def arrangement_svg(param: ArrangementParam, size: int = 400, extent: float = 4.0) -> str:
    """Real slice of the affine arrangement with the finite q points labeled."""
    def to_px(x, y):
        return (size / 2 + x * size / (2 * extent), size / 2 - y * size / (2 * extent))

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">', f'<rect width="{size}" height="{size}" fill="white"/>']
    colors = ["black", "blue", "darkgreen", "red"]
    for i, c in enumerate(line_coeffs(param)[:4]):
        a, b, w = (complex(x) for x in c)
        if max(abs(a.imag), abs(b.imag), abs(w.imag)) > FLOAT_TOL:
            continue   # a non-real line meets R^2 in at most a point
        a, b, w = a.real, b.real, w.real
        if abs(b) > abs(a):
            xs = (-extent, extent)
            ys = tuple(-(a * x + w) / b for x in xs)
        else:
            ys = (-extent, extent)
            xs = tuple(-(b * y + w) / a for y in ys)
        (x0, y0), (x1, y1) = to_px(xs[0], ys[0]), to_px(xs[1], ys[1])
        out.append(f'<line x1="{x0:.3f}" y1="{y0:.3f}" x2="{x1:.3f}" y2="{y1:.3f}" '
                   f'stroke="{colors[i]}" stroke-width="1.5"><title>l{i}</title></line>')
    for (i, j), P in sorted(intersections_q(param).items()):
        if _zero(P[2]):
            continue
        x, y = complex(P[0]), complex(P[1])
        if abs(x.imag) > FLOAT_TOL or abs(y.imag) > FLOAT_TOL:
            continue
        px, py = to_px(x.real, y.real)
        if 0 <= px <= size and 0 <= py <= size:
            out.append(f'<circle cx="{px:.3f}" cy="{py:.3f}" r="3" fill="black"/>')
            out.append(f'<text x="{px + 4:.3f}" y="{py - 4:.3f}" font-size="11">q{i}{j}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
