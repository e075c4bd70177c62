"""Exact scalars in Q(i, sqrt d) and the float tolerance.

A ``Surd`` is ``p + q*sqrt(d)`` with ``p, q`` Gaussian rationals. ``d`` is a
positive non-square integer (so ``sqrt d`` is real) or 0 for plain Q(i).
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

from .errors import InputError, MixedSurd

TAU = 1e-9


def _is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise InputError(f"not an exact rational: {x!r}")


class Surd:
    """(a + b i) + (c + e i) sqrt(d), all coefficients rational."""

    __slots__ = ("a", "b", "c", "e", "d")

    def __init__(self, a=0, b=0, c=0, e=0, d=0):
        d = int(d)
        c, e = _frac(c), _frac(e)
        if d < 0:
            raise InputError("surd radicand must be positive")
        if d and _is_square(d):
            r = math.isqrt(d)
            a, b = _frac(a) + c * r, _frac(b) + e * r
            c = e = Fraction(0)
            d = 0
        if d == 0:
            c = e = Fraction(0)
        self.a, self.b, self.c, self.e, self.d = _frac(a), _frac(b), c, e, d

    @classmethod
    def sqrt(cls, d: int) -> "Surd":
        return cls(0, 0, 1, 0, d)

    @classmethod
    def coerce(cls, x) -> "Surd":
        if isinstance(x, Surd):
            return x
        if isinstance(x, complex):
            raise InputError("complex floats are not exact")
        if isinstance(x, float):
            raise InputError("floats are not exact; use a Fraction")
        return cls(_frac(x))

    # field plumbing
    def _common(self, other) -> int:
        if self.d and other.d and self.d != other.d:
            raise MixedSurd(f"sqrt({self.d}) mixed with sqrt({other.d})")
        return self.d or other.d

    def __add__(self, o):
        o = _maybe(o)
        if o is NotImplemented:
            return o
        return Surd(self.a + o.a, self.b + o.b, self.c + o.c, self.e + o.e, self._common(o))

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, -self.c, -self.e, self.d)

    def __sub__(self, o):
        o = _maybe(o)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = _maybe(o)
        if o is NotImplemented:
            return o
        d = self._common(o)
        # (p1 + q1 s)(p2 + q2 s) with s^2 = d, p and q Gaussian
        p1, q1 = (self.a, self.b), (self.c, self.e)
        p2, q2 = (o.a, o.b), (o.c, o.e)
        pp = _gmul(p1, p2)
        qq = _gmul(q1, q2)
        pq = _gmul(p1, q2)
        qp = _gmul(q1, p2)
        return Surd(pp[0] + d * qq[0], pp[1] + d * qq[1], pq[0] + qp[0], pq[1] + qp[1], d)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _maybe(o)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, o):
        return Surd.coerce(o) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out, base = Surd(1, d=self.d), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "Surd":
        if self.is_zero():
            raise ZeroDivisionError("Surd division by zero")
        d = self.d
        p, q = (self.a, self.b), (self.c, self.e)
        # 1/(p + q s) = (p - q s) / (p^2 - d q^2)
        pp, qq = _gmul(p, p), _gmul(q, q)
        n = (pp[0] - d * qq[0], pp[1] - d * qq[1])
        m = n[0] * n[0] + n[1] * n[1]
        ninv = (n[0] / m, -n[1] / m)
        x = _gmul(p, ninv)
        y = _gmul((-q[0], -q[1]), ninv)
        return Surd(x[0], x[1], y[0], y[1], d)

    def conjugate(self) -> "Surd":
        return Surd(self.a, -self.b, self.c, -self.e, self.d)

    @property
    def real(self) -> "Surd":
        return Surd(self.a, 0, self.c, 0, self.d)

    @property
    def imag(self) -> "Surd":
        return Surd(self.b, 0, self.e, 0, self.d)

    def abs2(self) -> "Surd":
        return (self * self.conjugate()).real

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.e)

    def is_real(self) -> bool:
        return not (self.b or self.e)

    def is_rational(self) -> bool:
        return self.is_real() and not self.c

    def sign(self) -> int:
        """Sign of a real surd, decided exactly."""
        if not self.is_real():
            raise InputError("sign of a non-real surd")
        x, y = self.a, self.c
        sx, sy = (x > 0) - (x < 0), (y > 0) - (y < 0)
        if sy == 0:
            return sx
        if sx == 0 or sx == sy:
            return sy
        # opposite signs: compare x^2 with d y^2
        return sx if x * x > self.d * y * y else sy

    def __lt__(self, o):
        return (self - _maybe(o)).sign() < 0

    def __le__(self, o):
        return (self - _maybe(o)).sign() <= 0

    def __gt__(self, o):
        return (self - _maybe(o)).sign() > 0

    def __ge__(self, o):
        return (self - _maybe(o)).sign() >= 0

    def __eq__(self, o):
        o = _maybe(o)
        if o is NotImplemented:
            return False
        try:
            self._common(o)
        except MixedSurd:
            return False
        return (self - o).is_zero()

    def __hash__(self):
        if self.c == 0 and self.e == 0:
            return hash((self.a, self.b))
        return hash((self.a, self.b, self.c, self.e, self.d))

    def __complex__(self):
        s = math.sqrt(self.d) if self.d else 0.0
        return complex(float(self.a) + float(self.c) * s, float(self.b) + float(self.e) * s)

    def __float__(self):
        if not self.is_real():
            raise InputError("float() of a non-real surd")
        return complex(self).real

    def __repr__(self):
        parts = [f"{self.a}", f"{self.b}i"]
        if self.d:
            parts += [f"({self.c}+{self.e}i)sqrt{self.d}"]
        return "Surd(" + " + ".join(parts) + ")"


def _gmul(p, q):
    return (p[0] * q[0] - p[1] * q[1], p[0] * q[1] + p[1] * q[0])


def _maybe(o):
    if isinstance(o, Surd):
        return o
    if isinstance(o, (int, Fraction)):
        return Surd(o)
    return NotImplemented


I = Surd(0, 1)
ONE = Surd(1)
ZERO = Surd(0)


def is_exact(x) -> bool:
    return isinstance(x, (Surd, int, Fraction))


def as_complex(x) -> complex:
    return complex(x)
