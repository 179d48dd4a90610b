"""Heights, the Matveev-type lower bound, and the auxiliary log inequalities.

Everything here returns :class:`~assocpell.realnum.CReal` enclosures; since
these quantities only ever feed upper-bound machinery, callers use ``.hi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from gmpy2 import mpfr

from .realnum import CReal, Const, Expr, Log, Sqrt, UndecidableSign, as_expr, certify_less, default_precision

# ---------------------------------------------------------------------------
# Algebraic numbers and heights
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalNumber:
    value: Fraction

    def __init__(self, value):
        object.__setattr__(self, "value", Fraction(value))

    def expr(self) -> Expr:
        return Const(self.value)

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class QuadraticNumber:
    """Root of the primitive polynomial a0 x^2 + a1 x + a2 with a0 > 0.

    ``root`` selects ``(-a1 + root*sqrt(disc)) / (2 a0)`` with root = +1 or -1.
    """

    a0: int
    a1: int
    a2: int
    root: int = 1

    def __post_init__(self):
        if self.a0 <= 0:
            raise ValueError("leading coefficient must be positive")
        if math.gcd(math.gcd(self.a0, self.a1), self.a2) != 1:
            raise ValueError("minimal polynomial must be primitive")
        if self.discriminant <= 0:
            raise ValueError("only real quadratic irrationals are supported")
        if math.isqrt(self.discriminant) ** 2 == self.discriminant:
            raise ValueError("polynomial is reducible over Q")
        if self.root not in (1, -1):
            raise ValueError("root selector must be +1 or -1")

    @property
    def discriminant(self) -> int:
        return self.a1 * self.a1 - 4 * self.a0 * self.a2

    def conjugate_exprs(self) -> tuple[Expr, Expr]:
        s = Sqrt(Const(self.discriminant))
        den = Const(2 * self.a0)
        plus = (Const(-self.a1) + s) / den
        minus = (Const(-self.a1) - s) / den
        return (plus, minus) if self.root == 1 else (minus, plus)

    def expr(self) -> Expr:
        return self.conjugate_exprs()[0]

    def __str__(self):
        return f"root({self.a0}x^2{self.a1:+d}x{self.a2:+d}, {self.root:+d})"


AlgebraicNumber = Union[RationalNumber, QuadraticNumber]

ALPHA_NUMBER = QuadraticNumber(1, -2, -1, 1)


def height(x: AlgebraicNumber | int | Fraction, prec: int | None = None) -> CReal:
    """Absolute logarithmic height, enclosed at ``prec`` bits."""
    prec = prec or default_precision()
    if isinstance(x, (int, Fraction)):
        x = RationalNumber(x)
    if isinstance(x, RationalNumber):
        v = x.value
        if v == 0:
            return CReal.exact(0, prec)
        return Log(Const(max(abs(v.numerator), v.denominator))).enclose(prec)
    total = Log(Const(x.a0)).enclose(prec)
    for r in x.conjugate_exprs():
        lr = abs(r.enclose(prec)).log()
        if lr.lo >= 0:
            total = total + lr
        elif lr.hi > 0:
            total = total + CReal(mpfr(0), lr.hi, prec)
    return total / 2


@dataclass(frozen=True)
class HeightTerm:
    """One summand of a height estimate.

    ``op`` says how the term joins the running estimate: ``"product"`` uses
    h(x y^{+-1}) <= h(x) + h(y), ``"sum"`` uses h(x +- y) <= h(x) + h(y) + log 2.
    ``power`` applies h(y^k) = |k| h(y) to the term first.
    """

    height: CReal | Expr | int | Fraction
    op: str = "product"
    power: int = 1


def height_bound_combine(parts: Sequence[HeightTerm | tuple], prec: int | None = None) -> CReal:
    """Upper bound for the height of a combination of numbers with known heights."""
    prec = prec or default_precision()
    total: CReal | None = None
    log2 = Log(Const(2)).enclose(prec)
    for part in parts:
        if not isinstance(part, HeightTerm):
            part = HeightTerm(*part)
        if part.op not in ("product", "sum"):
            raise ValueError(f"unknown combination {part.op!r}")
        h = part.height if isinstance(part.height, CReal) else as_expr(part.height).enclose(prec)
        term = h * abs(part.power)
        if total is None:
            total = term
        else:
            total = total + term
            if part.op == "sum":
                total = total + log2
    if total is None:
        return CReal.exact(0, prec)
    return total


# ---------------------------------------------------------------------------
# Linear forms and the Matveev-type bound
# ---------------------------------------------------------------------------


@dataclass
class LinearFormTerm:
    A: CReal | Expr | int | Fraction | str
    gamma: AlgebraicNumber | None = None
    b: int | None = None
    label: str = ""


@dataclass
class LinearFormSpec:
    """Data for a lower bound on log|gamma_1^b_1 ... gamma_l^b_l - 1|.

    ``D`` may be left as None when only the coefficient of (1 + log D) is
    wanted, as happens when D is one of the unknowns.
    """

    degree: int
    terms: list[LinearFormTerm]
    D: int | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def l(self) -> int:
        return len(self.terms)

    def check(self, prec: int | None = None) -> None:
        """Reject any A_j certifiably below max(d h(gamma_j), |log gamma_j|, 0.16), or D < |b_j|.

        A_j is often chosen equal to the modified height, so overlapping
        enclosures are accepted; :func:`matveev_coefficient` then uses the
        larger of the two upper endpoints.
        """
        prec = prec or default_precision()
        for t in self.terms:
            A = _enclose(t.A, prec)
            if t.gamma is not None:
                needed = modified_height(t.gamma, self.degree, prec)
                if A.hi < needed.lo:
                    raise ValueError(f"A for {t.label or t.gamma} is below the modified height {needed!r}")
            elif not CReal.exact(Fraction(4, 25), prec).hi <= A.lo:
                raise ValueError("A_j must be at least 0.16")
            if self.D is not None and t.b is not None and abs(t.b) > self.D:
                raise ValueError("D must dominate every exponent")


def _enclose(x, prec: int) -> CReal:
    if isinstance(x, CReal):
        return x
    return as_expr(x).enclose(prec)


def modified_height(gamma: AlgebraicNumber, degree: int, prec: int | None = None) -> CReal:
    """max(d h(gamma), |log gamma|, 0.16) as an enclosure (its ``hi`` is the bound)."""
    prec = prec or default_precision()
    h = height(gamma, prec) * degree
    lg = abs(gamma.expr().enclose(prec).log())
    floor = CReal.exact(Fraction(4, 25), prec)
    lo = max(h.lo, lg.lo, floor.lo)
    hi = max(h.hi, lg.hi, floor.hi)
    return CReal(lo, hi, prec)


def matveev_coefficient(spec: LinearFormSpec, prec: int | None = None, printed_degree_factor: bool = False) -> CReal:
    """1.4 * 30^(l+3) * l^4.5 * d^2 * (1 + log d) * A_1 ... A_l.

    With ``printed_degree_factor`` the degree factor is d^2 (1 + log d^2)
    instead of d^2 (1 + log d).
    """
    prec = prec or default_precision()
    l, d = spec.l, spec.degree
    c = CReal.exact(Fraction(14, 10), prec) * (30 ** (l + 3)) * (l ** 4) * Sqrt(Const(l)).enclose(prec)
    inner = d * d if printed_degree_factor else d
    c = c * (d * d) * (1 + Log(Const(inner)).enclose(prec))
    for t in spec.terms:
        A = _enclose(t.A, prec)
        if t.gamma is not None:
            need = modified_height(t.gamma, d, prec)
            A = CReal(max(A.lo, need.lo), max(A.hi, need.hi), prec)
        c = c * A
    return c


def matveev_bound(spec: LinearFormSpec, prec: int | None = None, printed_degree_factor: bool = False) -> CReal:
    """The value V with log|Gamma| > -V; requires ``spec.D``."""
    if spec.D is None:
        raise ValueError("matveev_bound needs D; use matveev_coefficient for the (1 + log D) coefficient")
    if spec.D < 1:
        raise ValueError("D must be positive")
    prec = prec or default_precision()
    c = matveev_coefficient(spec, prec, printed_degree_factor)
    return c * (1 + Log(Const(spec.D)).enclose(prec))


# ---------------------------------------------------------------------------
# L / (log L)^r < H  and  |log(1 + x)| transfer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LogBoundProblem:
    r: int
    H: CReal | Expr | int | Fraction | str


def solve_log_bound(problem: LogBoundProblem, prec: int | None = None) -> CReal:
    """2^r H (log H)^r, an upper bound for any L with L / (log L)^r < H."""
    prec = prec or default_precision()
    r = problem.r
    if r < 1:
        raise ValueError("r must be >= 1")
    H = _enclose(problem.H, prec)
    threshold = (4 * r * r) ** r
    try:
        ok = certify_less(CReal.exact(threshold, prec), H)
    except UndecidableSign:
        ok = False
    if not ok:
        raise ValueError(f"need H > (4r^2)^r = {threshold}")
    return H * (2 ** r) * H.log() ** r


def solve_shifted_log_bound(coef, r: int, prec: int | None = None) -> CReal:
    """Bound x from x < coef * (1 + log x)^r.

    With L = e x the hypothesis reads L / (log L)^r < e * coef, so
    x < 2^r coef (1 + log coef)^r.
    """
    prec = prec or default_precision()
    c = _enclose(coef, prec)
    e = CReal.exact(1, prec).exp()
    L = solve_log_bound(LogBoundProblem(r, c * e), prec)
    return L / e


def log_transfer_factor(a, prec: int | None = None) -> tuple[CReal, CReal]:
    """Factors with |log(1+x)| < F |x| and |x| < G |e^x - 1| whenever |x| < a.

    F = |log(1-a)| / a and G = a / (1 - e^(-a)); requires 0 < a < 1.
    """
    prec = prec or default_precision()
    A = _enclose(a, prec)
    if not (A.lo > 0 and A.hi < 1):
        raise ValueError("need 0 < a < 1")
    forward = abs((1 - A).log()) / A
    inverse = A / (1 - (-A).exp())
    return forward, inverse
