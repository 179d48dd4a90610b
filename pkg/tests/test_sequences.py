from __future__ import annotations

import mpmath
import pytest
from hypothesis import given, strategies as st

from assocpell.realnum import certify_less
from assocpell.sequences import (
    ALPHA,
    BETA,
    CONSTANTS,
    LOG_ALPHA,
    assoc_pell,
    assoc_pell_upto,
    binet_envelope,
    binet_value,
)


@pytest.fixture(autouse=True, scope="module")
def _mp_precision():
    with mpmath.workdps(200):
        yield


def naive(n):
    a, b = 1, 1
    for _ in range(n):
        a, b = b, 2 * b + a
    return a


@pytest.mark.parametrize("n,value", [(0, 1), (1, 1), (7, 239), (8, 577), (10, 3363), (11, 8119)])
def test_small_values(n, value):
    assert assoc_pell(n) == value


def test_negative_index_rejected():
    with pytest.raises(ValueError):
        assoc_pell(-1)


@given(st.integers(min_value=0, max_value=800))
def test_matches_naive_recurrence(n):
    assert assoc_pell(n) == naive(n)


@given(st.integers(min_value=1, max_value=600))
def test_recurrence_and_growth(n):
    assert assoc_pell(n + 1) == 2 * assoc_pell(n) + assoc_pell(n - 1)
    assert assoc_pell(n + 1) > assoc_pell(n)


def test_upto_prefix():
    assert assoc_pell_upto(6) == [1, 1, 3, 7, 17, 41, 99]


def test_constants_enclose_roots():
    alpha, beta, _ = CONSTANTS.at(192)
    assert (alpha * beta).contains(-1)
    assert (alpha + beta).contains(2)
    for r in (alpha, beta):
        assert (r * r - r * 2 - 1).contains(0)


def test_log_alpha_against_mpmath():
    ref = mpmath.log(1 + mpmath.sqrt(2))
    v = LOG_ALPHA.enclose(300)
    assert float(v.lo) <= float(ref) <= float(v.hi)
    assert mpmath.mpf(str(v.lo)) - mpmath.mpf(10) ** -80 < ref < mpmath.mpf(str(v.hi)) + mpmath.mpf(10) ** -80


def test_envelope_n1():
    lo, hi = binet_envelope(1)
    assert lo.contains(1)
    assert 5.828 < float(hi.lo) < 5.829


def test_envelope_n5():
    lo, hi = binet_envelope(5)
    assert 33.97 < float(lo.lo) < 33.98
    assert 197.99 < float(hi.lo) < 198.0
    assert certify_less(lo, 82) and certify_less(82, hi)


def test_envelope_rejects_zero():
    with pytest.raises(ValueError):
        binet_envelope(0)


def test_envelope_up_to_500():
    for n in range(1, 501):
        lo, hi = binet_envelope(n, 64)
        two_q = 2 * assoc_pell(n)
        if n == 1:
            assert lo.hi <= two_q  # alpha^0 = 1 < 2
        assert lo.hi <= two_q < hi.lo, n


def test_binet_identity_up_to_500():
    for n in range(2, 501):
        assert binet_value(n, 1200).contains(assoc_pell(n)), n


def test_alpha_beta_expressions():
    assert float(ALPHA.enclose(64).lo) == pytest.approx(2.414213562373095)
    assert float(BETA.enclose(64).lo) == pytest.approx(-0.41421356237309515)
