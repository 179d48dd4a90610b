"""Pieces shared by the three theorem pipelines."""

from __future__ import annotations

import math
import time
from decimal import Decimal
from fractions import Fraction
from typing import Hashable, Sequence

from ..cfrac import Convergent
from ..linforms import log_transfer_factor
from ..realnum import CReal, Const, Expr, LogRatio, as_expr, default_precision
from ..reduction import (
    MuCase,
    ReductionProblem,
    ReductionResult,
    continued_fraction_of,
    reduce,
    scan_at,
    w_threshold,
)
from ..sequences import ALPHA, LOG_10, LOG_ALPHA
from .report import (
    Comparison,
    StageRecord,
    compare_digits,
    compare_exact,
    info,
)

TAU_10_ALPHA = LOG_10 / LOG_ALPHA  # log 10 / log alpha
TAU_ALPHA_10 = LOG_ALPHA / LOG_10  # log alpha / log 10
LOG2 = LogRatio(2)


def dec(text: str) -> Fraction:
    return Fraction(Decimal(text))


def enc(x, prec: int | None = None) -> CReal:
    if isinstance(x, CReal):
        return x
    return as_expr(x).enclose(prec or default_precision())


def ceil_int(x: CReal) -> int:
    """Smallest integer >= every point of the enclosure."""
    return math.ceil(x.upper_fraction())


def round_up(x: CReal, sig: int = 3) -> Fraction:
    """Upper endpoint rounded up to ``sig`` significant decimal digits."""
    hi = x.upper_fraction()
    if hi <= 0:
        raise ValueError("round_up expects a positive quantity")
    e = math.floor(math.log10(float(hi))) - sig + 1
    unit = Fraction(10) ** e
    return math.ceil(hi / unit) * unit


def sci(x: Fraction | int, sig: int = 3) -> str:
    return f"{float(x):.{sig - 1}e}"


def lemma3_constant(y: Fraction | CReal, a: Fraction | CReal, divisor: Expr, prec: int | None = None) -> CReal:
    """F(a) * y / divisor with F(a) = |log(1 - a)| / a.

    From |e^z - 1| < y <= a, Lemma-3 style transfer gives |z| < F(a) y; the
    divisor turns |z| into the normalised form |u tau - v + mu|.
    """
    prec = prec or default_precision()
    forward, _ = log_transfer_factor(a, prec)
    return forward * enc(y, prec) / divisor.enclose(prec)


def pick_A(printed: str, derived: CReal) -> tuple[Fraction, bool]:
    """Use the printed constant when it certifiably dominates the derived one."""
    p = dec(printed)
    if derived.upper_fraction() <= p:
        return p, True
    return round_up(derived, 3), False


def paper_convergent_check(tau: Expr, index: int, printed_q: int) -> tuple[Convergent, Comparison, list[str]]:
    cf = continued_fraction_of(tau)
    conv = cf.convergent(index)
    notes = []
    c = compare_exact(f"q_{index}", printed_q, conv.q)
    if conv.q != printed_q:
        hits = [k for k in range(0, index + 12) if cf.convergent(k).q == printed_q]
        multiples = [
            (k, printed_q // cf.convergent(k).q)
            for k in range(1, index + 12)
            if printed_q % cf.convergent(k).q == 0 and printed_q // cf.convergent(k).q <= 10
        ]
        msg = f"printed q is not convergent {index}"
        if hits:
            msg += f"; it is convergent {hits[0]}"
        elif multiples:
            k, f = multiples[-1]
            msg += f"; it equals {f} * q_{k} and is not a convergent denominator at any index <= {index + 11}"
        c.note = msg
        notes.append(msg)
    return conv, c, notes


def eps_from_printed(A: Fraction, B: Expr, q: int, eps_text: str) -> CReal:
    """log(A q / eps) / log B evaluated with the printed eps, for reference."""
    v, _ = w_threshold(Const(A), B, q, CReal.exact(dec(eps_text)))
    return v


def reduction_outputs(r: ReductionResult) -> dict:
    out = {
        "convergentIndex": r.convergent_index,
        "q": r.q,
        "minEpsilon": r.min_epsilon,
        "minEpsilonCase": r.min_label,
        "wValue": r.w_value,
        "wBound": r.w_bound,
        "caseCount": r.case_count,
        "excludedCount": len(r.excluded),
        "rejectedConvergents": [
            {"index": x.index, "case": x.label, "epsilonUpper": x.epsilon.upper_fraction().__float__()}
            for x in r.rejected
        ],
    }
    if r.homogeneous:
        out["homogeneousCases"] = [
            {"case": h.label, "shift": list(h.shift), "convergentIndex": h.index, "delta": h.delta, "wBound": h.w_bound}
            for h in r.homogeneous
        ]
    out["overallWBound"] = r.overall_w_bound
    if r.epsilon_per_case is not None and len(r.epsilon_per_case) <= 100:
        out["epsilonPerCase"] = [{"case": lab, "epsilon": e} for lab, e in r.epsilon_per_case]
    return out


def run_reduction(
    name: str,
    *,
    tau: Expr,
    cases: Sequence[MuCase],
    A: Fraction,
    B: Expr,
    M: int,
    w_name: str,
    inputs: dict,
) -> tuple[StageRecord, ReductionResult]:
    t0 = time.perf_counter()
    problem = ReductionProblem(tau, cases, Const(A), B, M, name=name)
    r = reduce(problem)
    stage = StageRecord("reduction", name, inputs=dict(inputs, A=A, M=M, w=w_name))
    stage.outputs.update(reduction_outputs(r))
    stage.outputs["seconds"] = round(time.perf_counter() - t0, 3)
    return stage, r


def paper_scan(
    stage: StageRecord,
    *,
    tau: Expr,
    cases: Sequence[MuCase],
    A: Fraction,
    B: Expr,
    M: int,
    index: int | None = None,
    q: int | None = None,
    stop_on_failure: bool = False,
):
    """Evaluate eps exactly where the source did (its convergent, its M, its family)."""
    problem = ReductionProblem(tau, cases, Const(A), B, M, name=stage.name + " (published setting)")
    s = scan_at(problem, index=index, q=q, stop_on_failure=stop_on_failure)
    out = {
        "index": index,
        "q": s.q,
        "M": M,
        "casesChecked": s.checked,
        "caseCount": s.case_count,
        "nonPositive": s.nonpositive,
        "complete": s.checked + len(s.skipped) == s.case_count,
        "minEpsilon": s.min_epsilon,
        "minEpsilonCase": s.min_label,
    }
    if s.first_failure is not None:
        out["firstFailure"] = {"case": s.first_failure[0], "epsilon": s.first_failure[1]}
    if s.skipped:
        out["skipped"] = len(s.skipped)
    if s.epsilon_per_case is not None and len(s.epsilon_per_case) <= 100:
        out["epsilonPerCase"] = [{"case": lab, "epsilon": e} for lab, e in s.epsilon_per_case]
    stage.outputs["publishedSetting"] = out
    return s


def family(labels: Sequence[Hashable], build) -> list[MuCase]:
    return [build(lab) for lab in labels]


class ProductLabels(Sequence):
    """Index-addressable cartesian product of ranges (row-major, last varies fastest)."""

    def __init__(self, *ranges: range):
        self.ranges = ranges
        self._len = math.prod(len(r) for r in ranges)

    def __len__(self):
        return self._len

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(self._len))]
        if i < 0:
            i += self._len
        if not 0 <= i < self._len:
            raise IndexError(i)
        out = []
        for r in reversed(self.ranges):
            i, k = divmod(i, len(r))
            out.append(r[k])
        return tuple(reversed(out))
