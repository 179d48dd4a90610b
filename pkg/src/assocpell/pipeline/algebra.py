"""Exact arithmetic in Q(sqrt 2), used to spot mu values that are exact
combinations s tau + t (which no choice of convergent can reduce)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class QSqrt2:
    """a + b sqrt(2) with rational a, b."""

    a: Fraction
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    def __add__(self, o):
        o = _lift(o)
        return QSqrt2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, o):
        o = _lift(o)
        return QSqrt2(self.a - o.a, self.b - o.b)

    def __rsub__(self, o):
        return _lift(o) - self

    def __mul__(self, o):
        o = _lift(o)
        return QSqrt2(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - 2 * self.b * self.b

    def inverse(self) -> "QSqrt2":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse")
        return QSqrt2(self.a / n, -self.b / n)

    def __truediv__(self, o):
        return self * _lift(o).inverse()

    def __rtruediv__(self, o):
        return _lift(o) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = QSqrt2(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(2)

    def is_positive(self) -> bool:
        # sign of a + b sqrt 2 decided exactly
        a, b = self.a, self.b
        if b == 0:
            return a > 0
        if a >= 0 and b >= 0:
            return True
        if a <= 0 and b <= 0:
            return False
        if a > 0:  # b < 0
            return a * a > 2 * b * b
        return 2 * b * b > a * a


ALPHA_Q = QSqrt2(1, 1)


def _lift(x) -> QSqrt2:
    return x if isinstance(x, QSqrt2) else QSqrt2(Fraction(x))


def power_of_ten(x: Fraction) -> int | None:
    """e with x = 10^e, or None."""
    if x <= 0:
        return None
    num, den = x.numerator, x.denominator
    if den == 1:
        e = len(str(num)) - 1
        return e if num == 10 ** e else None
    if num == 1:
        e = len(str(den)) - 1
        return -e if den == 10 ** e else None
    return None


def power_relation(g: QSqrt2) -> tuple[int, int] | None:
    """(e, t) with g = 10^e alpha^t exactly, or None."""
    if not g.is_positive():
        return None
    e2 = power_of_ten(abs(g.norm()))
    if e2 is None or e2 % 2:
        return None
    e = e2 // 2
    u = g / Fraction(10) ** e  # a unit
    t = round(math.log(float(u)) / math.log(1 + math.sqrt(2)))
    return (e, t) if ALPHA_Q ** t == u else None
