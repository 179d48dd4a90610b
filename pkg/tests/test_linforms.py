from __future__ import annotations

import math
import random
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from assocpell.linforms import (
    ALPHA_NUMBER,
    HeightTerm,
    LinearFormSpec,
    LinearFormTerm,
    LogBoundProblem,
    QuadraticNumber,
    RationalNumber,
    height,
    height_bound_combine,
    log_transfer_factor,
    matveev_bound,
    matveev_coefficient,
    solve_log_bound,
    solve_shifted_log_bound,
)
from assocpell.realnum import CReal, LogRatio
from assocpell.sequences import LOG_10, LOG_ALPHA


@pytest.fixture(autouse=True, scope="module")
def _mp_precision():
    with mpmath.workdps(120):
        yield


with mpmath.workdps(120):
    LA = mpmath.log(1 + mpmath.sqrt(2))


def f(c: CReal) -> float:
    return float(c.hi)


def mp(x) -> mpmath.mpf:
    m, e = x.as_mantissa_exp()
    return mpmath.ldexp(mpmath.mpf(int(m)), int(e))


def brackets(c: CReal, ref) -> bool:
    with mpmath.workdps(300):
        return mp(c.lo) <= ref <= mp(c.hi)


def test_heights():
    assert height(RationalNumber(10)).contains(LOG_10.enclose(192)) or abs(f(height(10)) - math.log(10)) < 1e-15
    assert f(height(ALPHA_NUMBER)) == pytest.approx(float(LA) / 2, rel=1e-15)
    assert f(height(Fraction(2, 9))) == pytest.approx(math.log(9), rel=1e-15)
    assert f(height(0)) == 0


@given(st.fractions(min_value=-10 ** 9, max_value=10 ** 9, max_denominator=10 ** 9).filter(lambda x: x != 0))
def test_height_inversion_symmetry(x):
    a, b = height(x, 128), height(1 / x, 128)
    assert a.lo == b.lo and a.hi == b.hi


def test_quadratic_validation():
    with pytest.raises(ValueError):
        QuadraticNumber(2, -4, -2)  # not primitive
    with pytest.raises(ValueError):
        QuadraticNumber(1, 0, -4)  # reducible
    with pytest.raises(ValueError):
        QuadraticNumber(1, 0, 1)  # complex roots
    # 1 - sqrt 2 has the same height as alpha
    beta = QuadraticNumber(1, -2, -1, -1)
    assert f(height(beta)) == pytest.approx(f(height(ALPHA_NUMBER)))


def test_height_combine_examples():
    h = height_bound_combine([HeightTerm(LogRatio(18)), HeightTerm(LogRatio(9))])
    assert h.hi < 5.1
    k = height_bound_combine([HeightTerm(LogRatio(9), power=2), HeightTerm(LogRatio(2), power=2)])
    assert k.hi < 5.8
    s = height_bound_combine([HeightTerm(LogRatio(18)), HeightTerm(LogRatio(9)), HeightTerm(0, "sum")])
    assert s.hi < 5.8 and s.lo > 5.78
    one = height_bound_combine([HeightTerm(LOG_ALPHA)])
    assert brackets(one, LA)
    assert height_bound_combine([]).contains(0)
    with pytest.raises(ValueError):
        height_bound_combine([HeightTerm(1, "quotient")])


def spec3(a3, gamma3=None):
    return LinearFormSpec(
        2,
        [
            LinearFormTerm(LOG_ALPHA, ALPHA_NUMBER),
            LinearFormTerm(2 * LOG_10, RationalNumber(10)),
            LinearFormTerm(a3, gamma3),
        ],
    )


def mp_matveev(l, d, As, printed=False):
    inner = d * d if printed else d
    c = mpmath.mpf("1.4") * 30 ** (l + 3) * mpmath.mpf(l) ** mpmath.mpf("4.5") * d * d * (1 + mpmath.log(inner))
    for a in As:
        c *= a
    return c


def test_matveev_trivial():
    s = LinearFormSpec(1, [LinearFormTerm(1)], D=1)
    assert matveev_bound(s).contains(1134000)


def test_matveev_thm3_constant():
    c = matveev_coefficient(spec3(Fraction(102, 10)))
    ref = mp_matveev(3, 2, [LA, 2 * mpmath.log(10), mpmath.mpf("10.2")])
    assert brackets(c, ref)
    assert f(c) == pytest.approx(4.01480e13, rel=1e-5)  # frozen; prints as 4.1e13


def test_matveev_thm5_constant():
    c = matveev_coefficient(spec3(Fraction(1018, 100)))
    ref = mp_matveev(3, 2, [LA, 2 * mpmath.log(10), mpmath.mpf("10.18")])
    assert brackets(c, ref)
    assert f(c) == pytest.approx(4.00690833336e13, rel=1e-11)  # frozen


def test_printed_degree_factor_variant():
    a = matveev_coefficient(spec3(1))
    b = matveev_coefficient(spec3(1), printed_degree_factor=True)
    assert f(b) / f(a) == pytest.approx((1 + math.log(4)) / (1 + math.log(2)))


def test_matveev_needs_d():
    with pytest.raises(ValueError):
        matveev_bound(spec3(1))


def test_spec_check_rejects_small_A():
    with pytest.raises(ValueError):
        LinearFormSpec(2, [LinearFormTerm(Fraction(1, 10), ALPHA_NUMBER)]).check()
    with pytest.raises(ValueError):
        LinearFormSpec(2, [LinearFormTerm(Fraction(1, 10))]).check()
    with pytest.raises(ValueError):
        LinearFormSpec(2, [LinearFormTerm(5, RationalNumber(10), b=7)], D=5).check()
    spec3(Fraction(1018, 100), RationalNumber(Fraction(9, 2))).check()


@given(st.integers(1, 30), st.integers(1, 30), st.integers(1, 10 ** 6), st.integers(0, 10 ** 6))
def test_matveev_monotone(a, da, D, dD):
    base = LinearFormSpec(2, [LinearFormTerm(a), LinearFormTerm(3)], D=D)
    bigger = LinearFormSpec(2, [LinearFormTerm(a + da), LinearFormTerm(3)], D=D + dD)
    assert matveev_bound(base, 96).hi <= matveev_bound(bigger, 96).hi


def test_log_bound_examples():
    H = LOG_ALPHA.enclose(192)
    b = solve_log_bound(LogBoundProblem(2, CReal.exact(Fraction(19, 10) * 10 ** 26) / H))
    assert 2.9e30 < f(b) < 3.2e30
    e2 = math.e ** 2
    assert f(solve_log_bound(LogBoundProblem(1, "exp(2)"))) == pytest.approx(4 * e2)
    assert f(solve_log_bound(LogBoundProblem(2, 10 ** 6))) == pytest.approx(7.6347e8, rel=1e-4)
    with pytest.raises(ValueError):
        solve_log_bound(LogBoundProblem(2, 256))
    with pytest.raises(ValueError):
        solve_log_bound(LogBoundProblem(0, 10))


@pytest.mark.parametrize("r,H", [(1, 10 ** 3), (1, 10 ** 6), (2, 10 ** 3), (2, 10 ** 6)])
def test_log_bound_exhaustive(r, H):
    # every integer L >= 2 with L / (log L)^r < H lies below the bound; the scan
    # runs to twice the bound (L / (log L)^r increases for L > e^r)
    bound = f(solve_log_bound(LogBoundProblem(r, H)))
    top = int(2 * bound) + 1
    step = 10 ** 7
    for start in range(2, top, step):
        L = np.arange(start, min(start + step, top), dtype=np.float64)
        ok = L / np.log(L) ** r < H
        if ok.any():
            assert L[ok].max() < bound


def test_shifted_log_bound():
    # x < c (1 + log x)^r
    for c, r in [(10 ** 6, 1), (10 ** 6, 2), (35 * 10 ** 25, 2), (10 ** 14, 3)]:
        b = f(solve_shifted_log_bound(c, r))
        assert b > c
        x = b
        assert x >= c * (1 + math.log(x)) ** r


@pytest.mark.parametrize(
    "a,y,limit",
    [(Fraction(9995, 10000), Fraction(9991, 1000), Fraction(7598, 100)),
     (Fraction(2, 10), Fraction(111, 100), Fraction(124, 100)),
     (Fraction(1, 100), Fraction(102, 100), Fraction(103, 100))],
)
def test_transfer_examples(a, y, limit):
    F, G = log_transfer_factor(a)
    assert (F * y).upper_fraction() < limit
    ref = abs(mpmath.log(1 - mpmath.mpf(a.numerator) / a.denominator)) / (mpmath.mpf(a.numerator) / a.denominator)
    assert brackets(F, ref)


def test_transfer_rejects():
    for a in (0, 1, 2, -1):
        with pytest.raises(ValueError):
            log_transfer_factor(a)


def test_transfer_sanity_random():
    rng = random.Random(3)
    for _ in range(1000):
        a = Fraction(rng.randint(1, 999), 1000)
        F, G = log_transfer_factor(a, 96)
        x = mpmath.mpf(rng.uniform(-1, 1)) * (mpmath.mpf(a.numerator) / a.denominator)
        if x == 0:
            continue
        assert abs(mpmath.log(1 + x)) < mpmath.mpf(str(F.hi)) * abs(x)
        assert abs(x) < mpmath.mpf(str(G.hi)) * abs(mpmath.exp(x) - 1)
