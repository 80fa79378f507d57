"""Double-double arithmetic.

A :class:`DD` carries an unevaluated sum ``hi + lo`` of two floats with
``|lo| <= ulp(hi) / 2``, giving roughly 32 significant decimal digits. The
error-free transformations are the classical ones of Dekker and Knuth; no
fused multiply-add is assumed.

Only the operations needed by the divided-difference engine are provided:
the four arithmetic operations, ``exp``, ``log`` and ``pow`` with a real
exponent.
"""
from __future__ import annotations

import math

_SPLITTER = 134217729.0  # 2**27 + 1
_SPLIT_LIMIT = 6.69692879491417e299


def two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def quick_two_sum(a: float, b: float) -> tuple[float, float]:
    # requires |a| >= |b|
    s = a + b
    return s, b - (s - a)


def _split(a: float) -> tuple[float, float]:
    if abs(a) > _SPLIT_LIMIT:
        a *= 3.7252902984619140625e-09  # 2**-28
        t = _SPLITTER * a
        hi = t - (t - a)
        return hi * 268435456.0, (a - hi) * 268435456.0
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    if not math.isfinite(p):
        return p, 0.0
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


class DD:
    """Double-double number ``hi + lo``."""

    __slots__ = ("hi", "lo")

    def __init__(self, hi: float = 0.0, lo: float = 0.0):
        if lo:
            hi, lo = quick_two_sum(float(hi), float(lo)) if abs(hi) >= abs(lo) else two_sum(float(hi), float(lo))
        self.hi = float(hi)
        self.lo = float(lo)

    @classmethod
    def _raw(cls, hi: float, lo: float) -> "DD":
        obj = cls.__new__(cls)
        obj.hi = hi
        obj.lo = lo
        return obj

    def __repr__(self) -> str:
        return f"DD({self.hi!r}, {self.lo!r})"

    def __float__(self) -> float:
        return self.hi + self.lo

    def __bool__(self) -> bool:
        return self.hi != 0.0 or self.lo != 0.0

    # arithmetic -----------------------------------------------------------
    def __neg__(self) -> "DD":
        return DD._raw(-self.hi, -self.lo)

    def __pos__(self) -> "DD":
        return self

    def __abs__(self) -> "DD":
        return -self if self.hi < 0.0 or (self.hi == 0.0 and self.lo < 0.0) else self

    def __add__(self, other) -> "DD":
        if isinstance(other, DD):
            s, e = two_sum(self.hi, other.hi)
            t, f = two_sum(self.lo, other.lo)
            e += t
            s, e = quick_two_sum(s, e)
            e += f
            return DD._raw(*quick_two_sum(s, e))
        if isinstance(other, (int, float)):
            s, e = two_sum(self.hi, float(other))
            e += self.lo
            return DD._raw(*quick_two_sum(s, e))
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other) -> "DD":
        if isinstance(other, (DD, int, float)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other) -> "DD":
        if isinstance(other, (int, float)):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other) -> "DD":
        if isinstance(other, DD):
            p, e = two_prod(self.hi, other.hi)
            e += self.hi * other.lo + self.lo * other.hi
            return DD._raw(*quick_two_sum(p, e))
        if isinstance(other, (int, float)):
            b = float(other)
            p, e = two_prod(self.hi, b)
            e += self.lo * b
            return DD._raw(*quick_two_sum(p, e))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other) -> "DD":
        if isinstance(other, (int, float)):
            other = DD._raw(float(other), 0.0)
        if not isinstance(other, DD):
            return NotImplemented
        if other.hi == 0.0:
            raise ZeroDivisionError("double-double division by zero")
        q1 = self.hi / other.hi
        r = self - other * q1
        q2 = r.hi / other.hi
        r = r - other * q2
        q3 = r.hi / other.hi
        s, e = quick_two_sum(q1, q2)
        return DD._raw(s, e) + q3

    def __rtruediv__(self, other) -> "DD":
        if isinstance(other, (int, float)):
            return DD._raw(float(other), 0.0) / self
        return NotImplemented

    def __pow__(self, k) -> "DD":
        if isinstance(k, int):
            if k < 0:
                return 1.0 / (self ** (-k))
            result = DD._raw(1.0, 0.0)
            base = self
            while k:
                if k & 1:
                    result = result * base
                base = base * base
                k >>= 1
            return result
        return dd_pow(self, float(k))

    # comparisons ----------------------------------------------------------
    def _key(self, other):
        if isinstance(other, DD):
            return other.hi, other.lo
        return float(other), 0.0

    def __eq__(self, other) -> bool:
        try:
            return (self.hi, self.lo) == self._key(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __lt__(self, other) -> bool:
        return (self.hi, self.lo) < self._key(other)

    def __le__(self, other) -> bool:
        return (self.hi, self.lo) <= self._key(other)

    def __gt__(self, other) -> bool:
        return (self.hi, self.lo) > self._key(other)

    def __ge__(self, other) -> bool:
        return (self.hi, self.lo) >= self._key(other)

    def __hash__(self) -> int:
        return hash((self.hi, self.lo))

    def ldexp(self, k: int) -> "DD":
        return DD._raw(math.ldexp(self.hi, k), math.ldexp(self.lo, k))


LN2 = DD._raw(0.6931471805599453, 2.319046813846299558e-17)


def as_dd(x) -> DD:
    return x if isinstance(x, DD) else DD._raw(float(x), 0.0)


def dd_exp(a) -> DD:
    a = as_dd(a)
    if a.hi > 709.0:
        return DD._raw(math.inf, 0.0)
    if a.hi < -745.0:
        return DD._raw(0.0, 0.0)
    k = int(round(a.hi / LN2.hi))
    r = (a - LN2 * k).ldexp(-10)
    # Taylor series of exp(r) - 1 for |r| < 4e-4
    term = r
    total = r
    for n in range(2, 14):
        term = term * r / n
        total = total + term
        if abs(term.hi) < 1e-34:
            break
    # (1 + x)^2 - 1 = x * (2 + x), keeps digits of the small quantity
    for _ in range(10):
        total = total * (total + 2.0)
    return (total + 1.0).ldexp(k)


def dd_log(a) -> DD:
    a = as_dd(a)
    if a.hi <= 0.0:
        raise ValueError("logarithm of a non-positive number")
    y = DD._raw(math.log(a.hi), 0.0)
    for _ in range(2):
        y = y + a * dd_exp(-y) - 1.0
    return y


def dd_pow(a, p: float) -> DD:
    a = as_dd(a)
    if float(p).is_integer():
        return a ** int(p)
    return dd_exp(dd_log(a) * float(p))
