"""Certified simple continued fractions and convergents.

Quotients are certified by expanding both endpoints of an enclosure of x
exactly (they are dyadic rationals): every real between two numbers that
share a continued-fraction prefix shares that prefix too.  On top of that
each batch is recomputed at twice the precision and must agree.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

from .realnum import Add, Const, CReal, Div, Expr, Mul, Neg, Pow, Sub, UndecidableSign, as_expr, precision_schedule


@dataclass(frozen=True)
class Convergent:
    index: int
    p: int
    q: int

    def __iter__(self):
        return iter((self.p, self.q))

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)


def fraction_quotients(x: Fraction, limit: int | None = None) -> list[int]:
    """Exact (terminating) continued fraction of a rational."""
    num, den = x.numerator, x.denominator
    out: list[int] = []
    while den and (limit is None or len(out) < limit):
        a, r = divmod(num, den)
        out.append(a)
        num, den = den, r
    return out


def exact_rational(e: Expr) -> Fraction | None:
    """Value of an expression built from rationals with + - * / and integer powers, else None."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Neg):
        a = exact_rational(e.a)
        return None if a is None else -a
    if isinstance(e, Pow):
        a = exact_rational(e.a)
        if a is None or (a == 0 and e.k < 0):
            return None
        return a ** e.k
    ops = {Add: lambda a, b: a + b, Sub: lambda a, b: a - b, Mul: lambda a, b: a * b}
    if type(e) in ops or isinstance(e, Div):
        a, b = exact_rational(e.a), exact_rational(e.b)
        if a is None or b is None:
            return None
        if isinstance(e, Div):
            return None if b == 0 else a / b
        return ops[type(e)](a, b)
    return None


def certified_prefix(enclosure: CReal) -> tuple[list[int], bool]:
    """Quotients shared by every real in ``enclosure``.

    Returns ``(quotients, exact)``; ``exact`` is True when the enclosure is a
    single rational point, in which case the list is its full expansion.
    """
    lo, hi = enclosure.lower_fraction(), enclosure.upper_fraction()
    if lo == hi:
        return fraction_quotients(lo), True
    a, b = fraction_quotients(lo), fraction_quotients(hi)
    j = 0
    while j < len(a) and j < len(b) and a[j] == b[j]:
        j += 1
    # an endpoint whose expansion stops inside the shared prefix sits on a
    # cylinder boundary; drop the last shared term in that case
    if j == len(a) or j == len(b):
        j -= 1
    return a[: max(j, 0)], False


class ContinuedFraction:
    """Lazily extended, certified expansion of an irrational expression."""

    def __init__(self, x, precision: int | None = None, cap: int | None = None):
        self.expr: Expr = as_expr(x)
        self.precision = precision
        self.cap = cap
        self._quotients: list[int] = []
        self._exact = False
        self._convergents: list[Convergent] = []
        self._lock = threading.Lock()

    def quotients(self, count: int) -> list[int]:
        if count < 1:
            raise ValueError("count must be >= 1")
        with self._lock:
            if len(self._quotients) < count and not self._exact:
                self._extend(count)
            return self._quotients[:count]

    def _extend(self, count: int) -> None:
        r = exact_rational(self.expr)
        if r is not None:
            self._quotients, self._exact = fraction_quotients(r), True
            return
        for prec in precision_schedule(self.precision, self.cap):
            try:
                qs, exact = certified_prefix(self.expr.enclose(prec))
            except UndecidableSign:
                continue
            if exact or len(qs) >= count:
                if not exact:
                    check, _ = certified_prefix(self.expr.enclose(2 * prec))
                    if check[: len(qs)] != qs[: len(check)]:
                        raise AssertionError(f"quotients disagree between {prec} and {2 * prec} bits")
                self._quotients = qs
                self._exact = exact
                return
        raise UndecidableSign(
            f"only {len(self._quotients)} certified quotients of {self.expr!r} at the precision cap"
        )

    def convergent(self, k: int) -> Convergent:
        return self.convergents(k + 1)[k]

    def convergents(self, count: int) -> list[Convergent]:
        quotients = self.quotients(count)
        with self._lock:
            out = self._convergents
            if len(out) >= count:
                return out[:count]
            if out:
                p1, q1 = out[-1].p, out[-1].q
                p0, q0 = (out[-2].p, out[-2].q) if len(out) > 1 else (1, 0)
            else:
                p0, q0, p1, q1 = 0, 1, 1, 0  # seeds p_{-2}/q_{-2}, p_{-1}/q_{-1}
            for k in range(len(out), len(quotients)):
                a = quotients[k]
                p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
                if p1 * q0 - p0 * q1 != (1 if k % 2 else -1):
                    raise AssertionError(f"determinant identity fails at index {k}")
                out.append(Convergent(k, p1, q1))
            return out[:count]

    def first_exceeding(self, bound: int) -> Convergent:
        if bound < 1:
            raise ValueError("bound must be >= 1")
        count = 16
        while True:
            convs = self.convergents(count)
            for c in convs:
                if c.q > bound:
                    return c
            if self._exact and len(convs) < count:
                raise ValueError(f"{self.expr!r} is rational; no denominator exceeds {bound}")
            count *= 2


def partial_quotients(x, count: int, precision: int | None = None) -> list[int]:
    """First ``count`` certified partial quotients a_0, a_1, ... of ``x``."""
    return ContinuedFraction(x, precision).quotients(count)


def convergents(x, count: int, precision: int | None = None) -> list[Convergent]:
    """Convergents p_k/q_k for k = 0..count-1."""
    return ContinuedFraction(x, precision).convergents(count)


def first_denominator_exceeding(x, bound: int, precision: int | None = None) -> Convergent:
    """Convergent of smallest index whose denominator is greater than ``bound``."""
    return ContinuedFraction(x, precision).first_exceeding(bound)
