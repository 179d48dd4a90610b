from __future__ import annotations

import time

import pytest
from hypothesis import given, strategies as st

from assocpell.repdigits import BlockPattern, is_repdigit, repdigit_value
from assocpell.search import (
    Eq3Solution,
    Eq4Solution,
    Eq5Solution,
    repdigit_members,
    solve_eq3,
    solve_eq4,
    solve_eq5,
    two_block_members,
)
from assocpell.sequences import assoc_pell

PRINTED_EQ3 = [(2, 0, 2, 1), (2, 1, 2, 1), (3, 2, 4, 1), (3, 0, 6, 1), (3, 1, 6, 1)]


def oracle_eq3(n_max):
    reps = {repdigit_value(d, k): (d, k) for d in range(1, 10) for k in range(1, len(str(assoc_pell(n_max))) + 1)}
    out = []
    for n in range(n_max + 1):
        for m in range(n):
            hit = reps.get(assoc_pell(n) - assoc_pell(m))
            if hit:
                out.append((n, m, *hit))
    return sorted(out)


def oracle_eq5(k_max):
    strict, degenerate = set(), set()
    for k in range(k_max + 1):
        v = assoc_pell(k)
        for m in range(1, len(str(v)) + 3):
            for d2 in range(1, 10):
                w = v + repdigit_value(d2, m)
                if is_repdigit(w):
                    n, d1 = len(str(w)), int(str(w)[0])
                    (degenerate if n == m else strict).add((k, n, m, d1, d2))
    return sorted(strict), sorted(degenerate)


def test_eq3_95():
    t0 = time.perf_counter()
    sols = solve_eq3(95)
    assert time.perf_counter() - t0 < 1
    found = [s.as_tuple() for s in sols]
    assert len(found) == 6
    assert set(PRINTED_EQ3) <= set(found)
    assert (7, 4, 2, 3) in found and (7, 4, 4, 3) not in found
    assert found == oracle_eq3(95)


def test_eq4_examples():
    t0 = time.perf_counter()
    assert [s.value for s in solve_eq4(50)] == [239, 3363, 8119]
    assert time.perf_counter() - t0 < 1
    assert solve_eq4(6) == [] and solve_eq4(3) == []
    assert [s.n for s in solve_eq4(50)] == [7, 10, 11]


def test_eq5_examples():
    t0 = time.perf_counter()
    res = solve_eq5(50)
    assert time.perf_counter() - t0 < 5
    assert res.values == [1, 3, 7, 17, 41]
    assert res.strict_values == [3, 7, 17, 41]
    reps = {(s.value, str(s.d1) * s.n, str(s.d2) * s.m) for s in res.solutions}
    assert (17, "22", "5") in reps and (41, "44", "3") in reps
    assert (3, "11", "8") in reps and (7, "11", "4") in reps
    ones = sorted((s.d1, s.d2) for s in res.degenerate if s.value == 1 and s.k == 1)
    assert ones == [(d + 1, d) for d in range(1, 9)]
    assert all(s.n == s.m for s in res.degenerate)
    strict, degenerate = oracle_eq5(50)
    assert [(s.k, s.n, s.m, s.d1, s.d2) for s in res.solutions] == strict
    assert [(s.k, s.n, s.m, s.d1, s.d2) for s in res.degenerate] == degenerate


def test_lemma_oracles():
    assert repdigit_members(50) == [1, 3, 7, 99]
    assert two_block_members(50) == [17, 41, 577]
    assert repdigit_members(2) == [1, 3]


def test_argument_checks():
    for fn, bad in ((solve_eq3, 1), (solve_eq4, 2), (solve_eq5, -1), (repdigit_members, 0), (two_block_members, 0)):
        with pytest.raises(ValueError):
            fn(bad)


def test_solution_objects_verify():
    with pytest.raises(ValueError):
        Eq3Solution(7, 4, 4, 3)
    with pytest.raises(ValueError):
        Eq4Solution(7, BlockPattern(((2, 1), (3, 1), (8, 1))))
    with pytest.raises(ValueError):
        Eq5Solution(4, 2, 1, 2, 4)
    with pytest.raises(ValueError):
        Eq5Solution(1, 1, 1, 3, 2, degenerate=False)
    Eq5Solution(1, 1, 1, 3, 2, degenerate=True)


@given(st.integers(3, 120))
def test_eq3_reverify_and_order(n_max):
    sols = solve_eq3(n_max)
    assert sols == sorted(sols) == solve_eq3(n_max)
    for s in sols:
        assert assoc_pell(s.n) - assoc_pell(s.m) == repdigit_value(s.d, s.k)


@given(st.integers(3, 120))
def test_block_classes_are_exclusive(n_max):
    three = {s.value for s in solve_eq4(n_max)}
    assert not three & set(repdigit_members(n_max))
    assert not three & set(two_block_members(n_max))
    assert not set(repdigit_members(n_max)) & set(two_block_members(n_max))


@given(st.integers(0, 60))
def test_eq5_reverify(k_max):
    res = solve_eq5(k_max)
    for s in res.solutions + res.degenerate:
        assert assoc_pell(s.k) == repdigit_value(s.d1, s.n) - repdigit_value(s.d2, s.m)
    assert res.solutions == sorted(res.solutions)
