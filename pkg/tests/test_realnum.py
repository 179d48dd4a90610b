from __future__ import annotations

import math
import random
from fractions import Fraction

import gmpy2
import mpmath
import pytest
from hypothesis import given, strategies as st

from assocpell.realnum import (
    CReal,
    Const,
    LogRatio,
    ScaledLogRatio,
    UndecidableSign,
    certify_less,
    creal_eval,
    nearest_int_distance,
    parse_expr,
    precision_schedule,
)
from assocpell.sequences import ALPHA, LOG_10, LOG_ALPHA


@pytest.fixture(autouse=True, scope="module")
def _mp_precision():
    with mpmath.workdps(400):
        yield


def mp_of(x: gmpy2.mpfr):
    m, e = x.as_mantissa_exp()
    return mpmath.ldexp(mpmath.mpf(int(m)), int(e))


def inside(ref, c: CReal) -> bool:
    return mp_of(c.lo) <= ref <= mp_of(c.hi)


def test_sqrt2_64_bits():
    v = creal_eval(parse_expr("sqrt(2)"), 64)
    assert inside(mpmath.sqrt(2), v)
    assert v.radius < gmpy2.mpfr(2) ** -60


def test_log_alpha_against_independent_evaluation():
    for prec in (64, 192, 500):
        v = creal_eval(LOG_ALPHA, prec)
        assert inside(mpmath.log(1 + mpmath.sqrt(2)), v)
    assert str(mp_of(LOG_ALPHA.enclose(192).lo))[:11] == "0.881373587"


def test_alpha_times_beta():
    v = parse_expr("(1+sqrt(2))*(1-sqrt(2))").enclose(128)
    assert v.contains(-1) and not v.is_point()


@pytest.mark.parametrize("x,d", [("3.25", Fraction(1, 4)), ("7.9", Fraction(1, 10)), ("5/2", Fraction(1, 2)), (7, 0)])
def test_nearest_int_distance_exact(x, d):
    v = nearest_int_distance(x)
    assert v.contains(d) and v.width < 1e-50


def test_nearest_int_distance_expression():
    v = nearest_int_distance(parse_expr("10*sqrt(2)"))
    assert inside(abs(10 * mpmath.sqrt(2) - 14), v)


def test_nearest_int_distance_creal_range():
    v = nearest_int_distance(CReal.from_bounds(Fraction(9, 10), Fraction(11, 10)))
    assert v.lower_fraction() == 0 and v.upper_fraction() >= Fraction(1, 10)


def test_certify_less_examples():
    assert certify_less(1, 2)
    assert not certify_less(2, 1)
    assert certify_less(ALPHA ** 4, 82)
    with pytest.raises(UndecidableSign):
        certify_less(LOG_ALPHA, LOG_ALPHA)


def test_undecidable_log_of_zero():
    with pytest.raises(UndecidableSign):
        creal_eval(parse_expr("log(sqrt(2)*sqrt(2) - 2)"), 64, cap=512)


def test_precision_schedule():
    assert list(precision_schedule(192, 1600)) == [192, 384, 768, 1536, 1600]


def test_parse_rejects():
    for bad in ("foo(2)", "x + 1", "2 ** 0.5", "1 +"):
        with pytest.raises(ValueError):
            parse_expr(bad)


def test_parse_decimal_literals_are_exact():
    assert parse_expr("0.1").enclose(64).contains(Fraction(1, 10))
    assert parse_expr("3.2e30").enclose(128).contains(32 * 10 ** 29)


@given(st.integers(1, 10 ** 40), st.integers(1, 10 ** 40), st.sampled_from([64, 192, 700]))
def test_log_ratio_against_mpmath(p, q, prec):
    v = LogRatio(p, q).enclose(prec)
    assert inside(mpmath.log(mpmath.mpf(p) / q), v)


@given(st.integers(1, 10 ** 80), st.integers(1, 10 ** 80), st.sampled_from([60, 220, 900]))
def test_scaled_log_ratio_matches_quotient(num, den, prec):
    a = ScaledLogRatio(num, den, LOG_ALPHA).enclose(prec)
    ref = mpmath.log(mpmath.mpf(num) / den) / mpmath.log(1 + mpmath.sqrt(2))
    assert inside(ref, a)
    b = (LogRatio(num, den) / LOG_ALPHA).enclose(prec)
    assert a.lo <= b.hi and b.lo <= a.hi


# -- interval soundness fuzz on rational expressions --------------------------


def random_expr(rng: random.Random, depth: int):
    if depth == 0 or rng.random() < 0.25:
        v = Fraction(rng.randint(-10 ** 6, 10 ** 6), rng.randint(1, 10 ** 4))
        return Const(v), v
    op = rng.choice("+-*/^")
    a, av = random_expr(rng, depth - 1)
    if op == "^":
        k = rng.randint(0, 4)
        return a ** k, av ** k
    b, bv = random_expr(rng, depth - 1)
    if op == "+":
        return a + b, av + bv
    if op == "-":
        return a - b, av - bv
    if op == "*":
        return a * b, av * bv
    if bv == 0:
        return a + b, av + bv
    return a / b, av / bv


def test_interval_soundness_fuzz():
    rng = random.Random(7)
    checked = 0
    for _ in range(10 ** 4):
        e, exact = random_expr(rng, 4)
        prec = rng.choice([53, 64, 128, 256])
        try:
            v = e.enclose(prec)
        except (UndecidableSign, ZeroDivisionError):
            continue
        assert v.lower_fraction() <= exact <= v.upper_fraction()
        checked += 1
    assert checked > 9000


def test_monotone_refinement():
    rng = random.Random(11)
    for _ in range(500):
        e, _ = random_expr(rng, 3)
        e = e * parse_expr("log(alpha) + sqrt(3)")
        try:
            widths = [e.enclose(p).width for p in (64, 128, 256, 512)]
        except (UndecidableSign, ZeroDivisionError):
            continue
        assert all(b <= a for a, b in zip(widths, widths[1:]))


@given(st.fractions(min_value=-10 ** 6, max_value=10 ** 6, max_denominator=10 ** 6))
def test_distance_exact_rationals(x):
    v = nearest_int_distance(x)
    ref = min(x - math.floor(x), math.ceil(x) - x)
    assert v.contains(ref)


def test_log_10_value():
    assert inside(mpmath.log(10), LOG_10.enclose(256))
