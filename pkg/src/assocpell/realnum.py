"""Certified real arithmetic on outward-rounded MPFR intervals.

A :class:`CReal` is a closed interval ``[lo, hi]`` whose endpoints are MPFR
numbers computed with directed rounding, so the exact value of whatever
expression produced it is guaranteed to lie inside.  :class:`Expr` trees
describe real numbers symbolically and can be re-enclosed at any precision,
which is what the escalation helpers (``creal_eval``, ``certify_less``,
``nearest_int_distance``) rely on.

Precision defaults come from the environment:

``ASSOCPELL_PRECISION``      starting precision in bits (default 192)
``ASSOCPELL_MAX_PRECISION``  escalation cap in bits (default 8192)
"""

from __future__ import annotations

import ast
import math
import os
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Union

import gmpy2
from gmpy2 import mpfr, mpz

DEFAULT_PRECISION = 192
DEFAULT_MAX_PRECISION = 8192


class UndecidableSign(ArithmeticError):
    """A comparison or sign test could not be certified at the precision cap."""

    code = "UNDECIDABLE_SIGN"


def default_precision() -> int:
    return int(os.environ.get("ASSOCPELL_PRECISION", DEFAULT_PRECISION))


def max_precision() -> int:
    return int(os.environ.get("ASSOCPELL_MAX_PRECISION", DEFAULT_MAX_PRECISION))


def precision_schedule(start: int | None = None, cap: int | None = None) -> Iterator[int]:
    """Yield ``start, 2*start, 4*start, ...`` up to and including ``cap``."""
    prec = start or default_precision()
    cap = cap or max_precision()
    prec = min(prec, cap)
    while True:
        yield prec
        if prec >= cap:
            return
        prec = min(2 * prec, cap)


@lru_cache(maxsize=None)
def _down(prec: int) -> gmpy2.context:
    return gmpy2.context(precision=prec, round=gmpy2.RoundDown)


@lru_cache(maxsize=None)
def _up(prec: int) -> gmpy2.context:
    return gmpy2.context(precision=prec, round=gmpy2.RoundUp)


@lru_cache(maxsize=None)
def _near(prec: int) -> gmpy2.context:
    return gmpy2.context(precision=prec, round=gmpy2.RoundToNearest)


@lru_cache(maxsize=4096)
def _log_int(n: int, prec: int) -> "CReal":
    return LogRatio(n)._eval(prec)


def _exact_mpfr(n: int) -> mpfr:
    return mpfr(mpz(n), max(mpz(n).bit_length(), 2))


def _negate(x: mpfr) -> mpfr:
    # unary minus on an mpfr rounds to the ambient context precision; this does not
    return _down(max(x.precision, 2)).sub(_ZERO, x)


_ZERO = mpfr(0)
_ONE = mpfr(1, 2)


def to_fraction(x: mpfr) -> Fraction:
    num, den = x.as_integer_ratio()
    return Fraction(int(num), int(den))


Number = Union[int, Fraction]


class CReal:
    """Closed interval ``[lo, hi]`` known to contain a real number."""

    __slots__ = ("lo", "hi", "prec")

    def __init__(self, lo: mpfr, hi: mpfr, prec: int):
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi
        self.prec = prec

    # -- construction -----------------------------------------------------

    @classmethod
    def exact(cls, value: Number | str | float, prec: int | None = None) -> "CReal":
        """Tightest enclosure of an exact rational at ``prec`` bits."""
        prec = prec or default_precision()
        v = value if isinstance(value, Fraction) else Fraction(value)
        num, den = v.numerator, v.denominator
        if den == 1:
            return cls(_down(prec).add(_exact_mpfr(num), 0), _up(prec).add(_exact_mpfr(num), 0), prec)
        n, d = _exact_mpfr(num), _exact_mpfr(den)
        return cls(_down(prec).div(n, d), _up(prec).div(n, d), prec)

    @classmethod
    def from_bounds(cls, lo: Number, hi: Number, prec: int | None = None) -> "CReal":
        prec = prec or default_precision()
        return cls(cls.exact(lo, prec).lo, cls.exact(hi, prec).hi, prec)

    # -- views ------------------------------------------------------------

    @property
    def center(self) -> mpfr:
        return _up(self.prec + 2).div(_up(self.prec + 2).add(self.lo, self.hi), 2)

    @property
    def radius(self) -> mpfr:
        ctx = _up(self.prec + 2)
        c = self.center
        return max(ctx.sub(c, self.lo), ctx.sub(self.hi, c))

    @property
    def width(self) -> mpfr:
        return _up(self.prec).sub(self.hi, self.lo)

    @property
    def precision_bits(self) -> int:
        return self.prec

    def lower_fraction(self) -> Fraction:
        return to_fraction(self.lo)

    def upper_fraction(self) -> Fraction:
        return to_fraction(self.hi)

    def contains(self, value: Number | "CReal") -> bool:
        if isinstance(value, CReal):
            return self.lo <= value.lo and value.hi <= self.hi
        v = Fraction(value)
        return self.lower_fraction() <= v <= self.upper_fraction()

    def is_positive(self) -> bool:
        return self.lo > 0

    def is_negative(self) -> bool:
        return self.hi < 0

    def is_point(self) -> bool:
        return self.lo == self.hi

    def __float__(self) -> float:
        return float(self.center)

    def __repr__(self) -> str:
        digits = max(6, min(40, int(self.prec * 0.30103) - 2))
        return f"CReal([{self.lo:.{digits}g}, {self.hi:.{digits}g}], prec={self.prec})"

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "CReal":
        if isinstance(other, CReal):
            return other
        if isinstance(other, (int, Fraction)):
            return CReal.exact(other, self.prec)
        return NotImplemented

    def _p(self, other: "CReal") -> int:
        return max(self.prec, other.prec)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self._p(o)
        return CReal(_down(p).add(self.lo, o.lo), _up(p).add(self.hi, o.hi), p)

    __radd__ = __add__

    def __neg__(self):
        return CReal(_negate(self.hi), _negate(self.lo), self.prec)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self._p(o)
        return CReal(_down(p).sub(self.lo, o.hi), _up(p).sub(self.hi, o.lo), p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self._p(o)
        dn, up = _down(p), _up(p)
        pairs = ((self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi))
        return CReal(min(dn.mul(a, b) for a, b in pairs), max(up.mul(a, b) for a, b in pairs), p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.lo <= 0 <= o.hi:
            raise UndecidableSign("division by an interval that contains zero")
        p = self._p(o)
        dn, up = _down(p), _up(p)
        pairs = ((self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi))
        return CReal(min(dn.div(a, b) for a, b in pairs), max(up.div(a, b) for a, b in pairs), p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return CReal(_ZERO, max(_negate(self.lo), self.hi), self.prec)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return CReal.exact(1, self.prec) / (self ** (-k))
        if k == 0:
            return CReal.exact(1, self.prec)
        base = abs(self) if k % 2 == 0 else self
        return CReal(_down(self.prec).pow(base.lo, k), _up(self.prec).pow(base.hi, k), self.prec)

    def log(self) -> "CReal":
        if self.lo <= 0:
            raise UndecidableSign("log of an interval that is not certified positive")
        return CReal(_down(self.prec).log(self.lo), _up(self.prec).log(self.hi), self.prec)

    def exp(self) -> "CReal":
        return CReal(_down(self.prec).exp(self.lo), _up(self.prec).exp(self.hi), self.prec)

    def sqrt(self) -> "CReal":
        if self.lo < 0:
            raise UndecidableSign("sqrt of an interval that is not certified non-negative")
        return CReal(_down(self.prec).sqrt(self.lo), _up(self.prec).sqrt(self.hi), self.prec)

    def hull(self, other: "CReal") -> "CReal":
        return CReal(min(self.lo, other.lo), max(self.hi, other.hi), self._p(other))


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------


class Expr:
    """Symbolic real number that can be enclosed at any precision."""

    __slots__ = ("_cache",)

    def __init__(self):
        self._cache: dict[int, CReal] = {}

    def enclose(self, prec: int) -> CReal:
        hit = self._cache.get(prec)
        if hit is None:
            hit = self._eval(prec)
            self._cache[prec] = hit
        return hit

    def _eval(self, prec: int) -> CReal:  # pragma: no cover - abstract
        raise NotImplementedError

    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, k: int):
        return Pow(self, k)


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value: Number):
        super().__init__()
        self.value = Fraction(value)

    def _eval(self, prec):
        return CReal.exact(self.value, prec)

    def __repr__(self):
        return str(self.value)


class _Binary(Expr):
    __slots__ = ("a", "b")
    symbol = "?"

    def __init__(self, a: Expr, b: Expr):
        super().__init__()
        self.a, self.b = a, b

    def __repr__(self):
        return f"({self.a!r} {self.symbol} {self.b!r})"


class Add(_Binary):
    __slots__ = ()
    symbol = "+"

    def _eval(self, prec):
        return self.a.enclose(prec) + self.b.enclose(prec)


class Sub(_Binary):
    __slots__ = ()
    symbol = "-"

    def _eval(self, prec):
        return self.a.enclose(prec) - self.b.enclose(prec)


class Mul(_Binary):
    __slots__ = ()
    symbol = "*"

    def _eval(self, prec):
        return self.a.enclose(prec) * self.b.enclose(prec)


class Div(_Binary):
    __slots__ = ()
    symbol = "/"

    def _eval(self, prec):
        return self.a.enclose(prec) / self.b.enclose(prec)


class _Unary(Expr):
    __slots__ = ("a",)
    name = "?"

    def __init__(self, a: Expr):
        super().__init__()
        self.a = a

    def __repr__(self):
        return f"{self.name}({self.a!r})"


class Neg(_Unary):
    __slots__ = ()
    name = "neg"

    def _eval(self, prec):
        return -self.a.enclose(prec)

    def __repr__(self):
        return f"-{self.a!r}"


class Log(_Unary):
    __slots__ = ()
    name = "log"

    def _eval(self, prec):
        return self.a.enclose(prec).log()


class Sqrt(_Unary):
    __slots__ = ()
    name = "sqrt"

    def _eval(self, prec):
        return self.a.enclose(prec).sqrt()


class Exp(_Unary):
    __slots__ = ()
    name = "exp"

    def _eval(self, prec):
        return self.a.enclose(prec).exp()


class Pow(Expr):
    __slots__ = ("a", "k")

    def __init__(self, a: Expr, k: int):
        super().__init__()
        if not isinstance(k, int):
            raise TypeError("only integer powers are supported")
        self.a, self.k = a, k

    def _eval(self, prec):
        return self.a.enclose(prec) ** self.k

    def __repr__(self):
        return f"{self.a!r}**{self.k}"


class LogRatio(Expr):
    """``log(num/den)`` for positive integers, without forming the quotient.

    This is the hot path of large reduction families, where the argument is
    a big integer and building a generic tree per case is too slow.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: int, den: int = 1):
        super().__init__()
        if num <= 0 or den <= 0:
            raise ValueError("LogRatio needs positive integers")
        self.num, self.den = num, den

    def enclose(self, prec):
        # uncached on purpose: these nodes are built once per case
        return self._eval(prec)

    def _eval(self, prec):
        dn, up = _down(prec), _up(prec)
        n = _exact_mpfr(self.num)
        if self.den == 1:
            return CReal(dn.log(n), up.log(n), prec)
        d = _exact_mpfr(self.den)
        return CReal(dn.sub(dn.log(n), up.log(d)), up.sub(up.log(n), dn.log(d)), prec)

    def __repr__(self):
        return f"log({self.num}/{self.den})" if self.den != 1 else f"log({self.num})"


class ScaledLogRatio(Expr):
    """``log(num/den) / divisor`` with a positive constant ``divisor``.

    Same role as :class:`LogRatio` for families of the form
    log(integer) / log(alpha); the divisor's enclosure is shared.
    """

    __slots__ = ("num", "den", "divisor")

    def __init__(self, num: int, den: int, divisor: Expr):
        super().__init__()
        if num <= 0 or den <= 0:
            raise ValueError("ScaledLogRatio needs positive integers")
        self.num, self.den, self.divisor = num, den, divisor

    def enclose(self, prec):
        return self._eval(prec)

    def _eval(self, prec):
        # one round-to-nearest log, widened by its error budget:
        # rounding num to prec bits moves log by <= 2^(1-prec), the log itself by <= ulp
        r = _near(prec).log(mpfr(self.num, prec))
        err = gmpy2.mul_2exp(_ONE, max(gmpy2.get_exp(r), 1) + 1 - prec)
        dn, up = _down(prec), _up(prec)
        lo, hi = dn.sub(r, err), up.add(r, err)
        if self.den != 1:
            ld = _log_int(self.den, prec)
            lo, hi = dn.sub(lo, ld.hi), up.sub(hi, ld.lo)
        D = self.divisor.enclose(prec)
        if not D.lo > 0:
            raise UndecidableSign("divisor must be positive")
        lo = dn.div(lo, D.hi if lo >= 0 else D.lo)
        hi = up.div(hi, D.lo if hi >= 0 else D.hi)
        return CReal(lo, hi, prec)

    def __repr__(self):
        return f"log({self.num}/{self.den})/{self.divisor!r}"


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)):
        return Const(x)
    if isinstance(x, str):
        return parse_expr(x)
    raise TypeError(f"cannot build an expression from {type(x).__name__}")


def log(x) -> Expr:
    return Log(as_expr(x))


def sqrt(x) -> Expr:
    return Sqrt(as_expr(x))


def exp(x) -> Expr:
    return Exp(as_expr(x))


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_FUNCS = {"log": Log, "ln": Log, "sqrt": Sqrt, "exp": Exp}


def _names() -> dict[str, Expr]:
    r2 = Sqrt(Const(2))
    return {"alpha": Const(1) + r2, "beta": Const(1) - r2}


def parse_expr(text: str) -> Expr:
    """Parse an arithmetic expression such as ``log(10)/log(1+sqrt(2))``.

    Supported: ``+ - * /``, integer powers (``**`` or ``^``), decimal and
    integer literals (taken exactly), ``log``/``ln``, ``sqrt``, ``exp``, and
    the names ``alpha = 1+sqrt(2)`` and ``beta = 1-sqrt(2)``.
    """
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"malformed expression {text!r}") from exc
    names = _names()

    def walk(node) -> Expr:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            return Const(Fraction(ast.get_source_segment(text.replace("^", "**"), node) or repr(node.value)))
        if isinstance(node, ast.Name):
            if node.id not in names:
                raise ValueError(f"unknown name {node.id!r}")
            return names[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner = walk(node.operand)
            return Neg(inner) if isinstance(node.op, ast.USub) else inner
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                k = _int_literal(node.right)
                return Pow(walk(node.left), k)
            ops = {ast.Add: Add, ast.Sub: Sub, ast.Mult: Mul, ast.Div: Div}
            cls = ops.get(type(node.op))
            if cls is None:
                raise ValueError(f"unsupported operator in {text!r}")
            return cls(walk(node.left), walk(node.right))
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and len(node.args) == 1:
            fn = _FUNCS.get(node.func.id)
            if fn is None:
                raise ValueError(f"unknown function {node.func.id!r}")
            return fn(walk(node.args[0]))
        raise ValueError(f"unsupported syntax in {text!r}")

    def _int_literal(node) -> int:
        sign = 1
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            sign, node = -1, node.operand
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return sign * node.value
        raise ValueError("exponents must be integer literals")

    return walk(tree)


# ---------------------------------------------------------------------------
# Certified predicates
# ---------------------------------------------------------------------------


def _magnitude_bits(x: CReal) -> int:
    m = max(abs(x.lo), abs(x.hi))
    if m == 0 or not gmpy2.is_finite(m):
        return 0
    return max(0, int(gmpy2.floor(gmpy2.log2(m))) + 1)


def creal_eval(expr, precision: int | None = None, margin: int = 4, cap: int | None = None) -> CReal:
    """Enclose ``expr`` with radius at most ``2**(margin - precision)``.

    The bound is absolute for ``|x| <= 1`` and relative above that.  Working
    precision doubles until the target is met; hitting the cap raises
    :class:`UndecidableSign` (the only failure mode is an undecidable
    interior sign, e.g. ``log`` of something that encloses zero).
    """
    expr = as_expr(expr)
    precision = precision or default_precision()
    last_exc: Exception | None = None
    for prec in precision_schedule(precision + 16, max(cap or max_precision(), precision + 16)):
        try:
            v = expr.enclose(prec)
        except UndecidableSign as exc:
            last_exc = exc
            continue
        target = gmpy2.mul_2exp(mpfr(1), margin - precision + _magnitude_bits(v))
        if v.radius <= target:
            return v
    raise UndecidableSign(f"could not enclose {expr!r} to {precision} bits") from last_exc


def _dist(x: Fraction) -> Fraction:
    return abs(x - math.floor(x + Fraction(1, 2)))


def distance_bounds(lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Exact range of ``||x||`` (distance to the nearest integer) on ``[lo, hi]``."""
    lower = Fraction(0) if math.ceil(lo) <= hi else min(_dist(lo), _dist(hi))
    half = Fraction(1, 2)
    upper = half if math.ceil(lo - half) <= hi - half else max(_dist(lo), _dist(hi))
    return lower, upper


def _straddles_half_integer(lo: Fraction, hi: Fraction) -> bool:
    if lo == hi:
        return False
    k = math.ceil(lo - Fraction(1, 2))
    return lo < k + Fraction(1, 2) < hi


def nearest_int_distance(x, precision: int | None = None) -> CReal:
    """Certified enclosure of ``||x||``, the distance from ``x`` to the nearest integer.

    Exact rationals give an exact answer (a half-integer gives 1/2).  A
    ``CReal`` gives the sound range over its enclosure.  For an expression the
    precision escalates until no half-integer lies strictly inside the
    enclosure.
    """
    if isinstance(x, (int, Fraction, str)) and not (isinstance(x, str) and not _is_number(x)):
        v = Fraction(x)
        d = _dist(v)
        return CReal.exact(d, precision)
    if isinstance(x, CReal):
        lo, hi = distance_bounds(x.lower_fraction(), x.upper_fraction())
        return CReal.from_bounds(lo, hi, x.prec)
    expr = as_expr(x)
    for prec in precision_schedule(precision):
        try:
            v = expr.enclose(prec)
        except UndecidableSign:
            continue
        lo_f, hi_f = v.lower_fraction(), v.upper_fraction()
        if not _straddles_half_integer(lo_f, hi_f):
            lo, hi = distance_bounds(lo_f, hi_f)
            return CReal.from_bounds(lo, hi, prec)
    raise UndecidableSign(f"{expr!r} is too close to a half-integer to certify ||x||")


def _is_number(s: str) -> bool:
    try:
        Fraction(s)
    except ValueError:
        return False
    return True


def certify_less(x, y, precision: int | None = None) -> bool:
    """Decide ``x < y`` with certified enclosures.

    Returns True when ``upper(x) < lower(y)`` and False when ``lower(x) >=
    upper(y)``; escalates precision for expressions and raises
    :class:`UndecidableSign` if the enclosures never separate (for instance
    when ``x`` and ``y`` are the same number).
    """
    if isinstance(x, CReal) or isinstance(y, CReal):
        xs = x if isinstance(x, CReal) else None
        ys = y if isinstance(y, CReal) else None
        prec = (xs or ys).prec
        xs = xs or as_expr(x).enclose(prec)
        ys = ys or as_expr(y).enclose(prec)
        verdict = _separate(xs, ys)
        if verdict is None:
            raise UndecidableSign("enclosures overlap")
        return verdict
    ex, ey = as_expr(x), as_expr(y)
    for prec in precision_schedule(precision):
        try:
            verdict = _separate(ex.enclose(prec), ey.enclose(prec))
        except UndecidableSign:
            continue
        if verdict is not None:
            return verdict
    raise UndecidableSign(f"cannot separate {ex!r} and {ey!r}")


def _separate(a: CReal, b: CReal) -> bool | None:
    if a.hi < b.lo:
        return True
    if a.lo >= b.hi and not (a.is_point() and b.is_point() and a.lo == b.lo):
        return False
    return None
