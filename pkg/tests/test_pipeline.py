from __future__ import annotations

import json
import math
from fractions import Fraction

import pytest

from assocpell.pipeline import ProofReport, StageRecord, emit_report, prove_thm3, prove_thm4, prove_thm5
from assocpell.pipeline.algebra import ALPHA_Q, QSqrt2, power_of_ten, power_relation
from assocpell.pipeline.common import ProductLabels, pick_A, round_up
from assocpell.pipeline.report import (
    compare_at_least,
    compare_certifies,
    compare_digits,
    compare_exact,
    compare_factor,
    compare_positive,
)
from assocpell.realnum import CReal
from assocpell.search import solve_eq3, solve_eq4, solve_eq5


@pytest.fixture(scope="module")
def thm3():
    return prove_thm3()


@pytest.fixture(scope="module")
def thm5():
    return prove_thm5()


def upper(v) -> Fraction:
    if isinstance(v, CReal):
        return v.upper_fraction()
    return Fraction(v)


# -- report plumbing -----------------------------------------------------------


def test_empty_report_json():
    doc = json.loads(emit_report(ProofReport("thm3"), "json"))
    assert doc["stages"] == [] and doc["theoremId"] == "thm3"
    assert set(doc) >= {"theoremId", "stages", "finalSolutions", "discrepancies"}


def test_unknown_stage_kind():
    with pytest.raises(ValueError):
        StageRecord("guess", "x")
    with pytest.raises(ValueError):
        emit_report(ProofReport("thm3"), "xml")


def test_comparison_modes():
    x = CReal.from_bounds(Fraction(389, 10 ** 6), Fraction(3891, 10 ** 7))
    assert compare_digits("e", "0.000389", x).matched
    assert not compare_digits("e", "0.000389", CReal.exact(Fraction(391, 10 ** 6))).matched
    assert compare_digits("e", "0.000389", CReal.exact(Fraction(390, 10 ** 6))).matched  # one unit off
    assert compare_exact("b", 94, 94).matched and not compare_exact("b", 94, 90).matched
    assert compare_factor("N", "3.2e30", CReal.exact(317 * 10 ** 28)).matched
    assert not compare_factor("N", "3.2e30", CReal.exact(2 * 10 ** 30)).matched
    assert compare_certifies("N", "3.2e30", CReal.exact(2 * 10 ** 30)).matched
    assert not compare_certifies("N", "3.2e30", CReal.exact(4 * 10 ** 30)).matched
    assert compare_at_least("e", "0.241531", CReal.exact(Fraction(1, 2))).matched
    assert not compare_positive("e", CReal.exact(-1)).matched


def test_algebra_helpers():
    assert ALPHA_Q * QSqrt2(1, -1) == QSqrt2(-1)
    assert power_relation(ALPHA_Q ** 5 * 100) == (2, 5)
    assert power_relation(QSqrt2(Fraction(2, 9))) is None
    assert power_of_ten(Fraction(1, 1000)) == -3 and power_of_ten(Fraction(20)) is None
    assert (ALPHA_Q ** -3).is_positive() and not QSqrt2(1, -1).is_positive()


def test_product_labels():
    p = ProductLabels(range(2, 4), range(1, 3), range(0, 2))
    assert len(p) == 8
    assert list(p) == [(a, b, c) for a in range(2, 4) for b in range(1, 3) for c in range(0, 2)]
    assert p[-1] == (3, 2, 1) and p[2:4] == [(2, 2, 0), (2, 2, 1)]
    with pytest.raises(IndexError):
        p[8]


def test_round_up_and_pick():
    assert round_up(CReal.exact(Fraction(2382, 1000)), 3) == Fraction(239, 100)
    assert pick_A("21", CReal.exact(20)) == (21, True)
    assert pick_A("1.17", CReal.exact(Fraction(23826, 10000))) == (Fraction(239, 100), False)


# -- thm3 ------------------------------------------------------------------


def test_thm3_solutions(thm3):
    assert [(s["n"], s["m"], s["d"], s["k"]) for s in thm3.final_solutions] == [s.as_tuple() for s in solve_eq3(97)]
    assert len(thm3.final_solutions) == 6
    documented = [d for d in thm3.discrepancies if d.kind == "documented"]
    assert [d.quantity for d in documented] == ["(7,4,4,3)"]


def test_thm3_text_table(thm3):
    text = emit_report(thm3, "text")
    assert "Final solutions (6):" in text
    assert "(7,4,4,3)" in text


def test_thm3_chain(thm3):
    st = {s.name: s for s in thm3.stages}
    N = st["case 2 Matveev bound and log-bound solve"].outputs["nBound"]
    r1 = st["reduction of n - m"]
    r2 = st["reduction of n"]
    assert r1.inputs["M"] >= math.ceil(upper(N)) and r2.inputs["M"] >= math.ceil(upper(N))
    assert r1.outputs["q"] > 6 * r1.inputs["M"]
    # the n - m bound feeds the family of the second reduction
    assert f"j = 1..{r1.outputs['nMinusMBound']}" in r2.inputs["mu"]
    assert thm3.stages[-1].inputs["nMax"] >= r2.outputs["nBound"]


def test_thm3_frozen_values(thm3):
    st = {s.name: s for s in thm3.stages}
    assert st["reduction of n - m"].outputs["nMinusMBound"] == 90
    assert st["reduction of n"].outputs["nBound"] == 97
    assert float(st["case 2 Matveev bound and log-bound solve"].outputs["nBound"].hi) == pytest.approx(2.7082091419e30, rel=1e-9)


# -- thm5 ------------------------------------------------------------------


def test_thm5_side_conditions(thm5):
    side = thm5.stages[0]
    assert side.kind == "sideCondition" and side.matched


def test_thm5_chain_and_solutions(thm5):
    st = {s.name: s for s in thm5.stages}
    K0 = st["case 2 Matveev bound and the combined k bound"].outputs["kBound"]
    r1 = st["reduction of n - m"]
    assert r1.inputs["M"] >= math.ceil(upper(K0))
    sub = st["substitute the n - m bound"]
    assert sub.inputs["nMinusMBound"] == r1.outputs["nMinusMBound"] == 34
    r2 = st["reduction of k"]
    assert r2.inputs["M"] >= math.ceil(upper(sub.outputs["kBound"])) + 5
    assert r2.outputs["kBound"] == 62
    sweep = thm5.stages[-1]
    assert sweep.inputs["kMax"] >= r2.outputs["kBound"]
    res = solve_eq5(sweep.inputs["kMax"])
    assert len(thm5.final_solutions) == len(res.solutions) + len(res.degenerate)
    assert sorted({s["value"] for s in thm5.final_solutions}) == [1, 3, 7, 17, 41]
    assert [d.quantity for d in thm5.discrepancies if d.kind == "documented"] == ["representations of 1"]


def test_sweep_limit_is_respected(thm5):
    r = prove_thm5(sweep_limit=70)
    assert r.stages[-1].inputs["kMax"] == 70


@pytest.mark.slow
def test_thm4_end_to_end():
    r = prove_thm4()
    assert [s["value"] for s in r.final_solutions] == [s.value for s in solve_eq4(50)]
    st = {s.name: s for s in r.stages}
    assert st["reduction of m1"].outputs["overallWBound"] - 1 == 51
    assert r.stages[-1].inputs["nMax"] >= 110
    doc = json.loads(emit_report(r, "json"))
    assert doc["stages"][0]["paperValue"] == "5e27"
