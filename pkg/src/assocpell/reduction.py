"""Baker-Davenport reduction in the Dujella-Pethő form.

For a convergent p/q of tau with q > 6M put eps = ||mu q|| - M ||tau q||.
If eps > 0 there is no solution of 0 < |u tau - v + mu| < A B^(-w) in
positive integers with u <= M and w >= log(A q / eps) / log B.

A problem carries a whole family of mu values.  Each case is evaluated
with integer fixed-point arithmetic: mu is enclosed once as
[lo, hi] * 2^-bits and for every convergent ||mu q|| is bracketed exactly
from (lo q mod 2^bits).  Cases the fixed-point bracket cannot decide fall
back to :func:`epsilon`, which escalates precision.

Cases with mu = s tau + t exactly (``homogeneous``) can never satisfy
eps > 0, since ||mu q|| <= |s| ||tau q||.  They are bounded instead by the
best-approximation property of convergents: for 0 < |x| < q_{N+1},
|x tau - y| >= |q_N tau - p_N|.
"""

from __future__ import annotations

import functools
from array import array
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Iterator, Sequence

import gmpy2
from gmpy2 import mpfr

from .cfrac import ContinuedFraction, Convergent
from .realnum import (
    CReal,
    Expr,
    UndecidableSign,
    as_expr,
    default_precision,
    max_precision,
    nearest_int_distance,
    precision_schedule,
)

log = logging.getLogger(__name__)


class NoConvergentFound(RuntimeError):
    code = "NO_CONVERGENT_FOUND"


# ---------------------------------------------------------------------------
# Problem description
# ---------------------------------------------------------------------------


@dataclass
class MuCase:
    """One mu of a family.

    ``excluded`` carries the caller's reason when the case is ruled out by a
    separate argument.  ``homogeneous = (s, t)`` declares mu = s tau + t.
    """

    label: Hashable
    mu: Expr
    excluded: str | None = None
    homogeneous: tuple[int, int] | None = None


class LazyFamily(Sequence):
    """Index-addressable family that builds each :class:`MuCase` on demand."""

    def __init__(self, labels: Sequence, build: Callable[[Hashable], MuCase]):
        self.labels = labels
        self.build = build

    def __len__(self):
        return len(self.labels)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self.build(lab) for lab in self.labels[i]]
        return self.build(self.labels[i])


@dataclass
class ReductionProblem:
    tau: Expr
    cases: Sequence[MuCase]
    A: Expr
    B: Expr
    M: int
    name: str = ""
    max_index: int = 400
    start_index: int | None = None

    def __post_init__(self):
        self.tau = as_expr(self.tau)
        self.A = as_expr(self.A)
        self.B = as_expr(self.B)
        if not isinstance(self.M, int) or self.M < 1:
            raise ValueError("M must be a positive integer")
        prec = default_precision()
        if not self.A.enclose(prec).lo > 0:
            raise ValueError("A must be certifiably positive")
        if not self.B.enclose(prec).lo > 1:
            raise ValueError("B must be certifiably greater than 1")


@dataclass
class RejectedConvergent:
    index: int
    q: int
    label: Hashable
    epsilon: CReal
    undecided: bool = False


@dataclass
class HomogeneousBound:
    label: Hashable
    shift: tuple[int, int]
    index: int
    q_next: int
    delta: CReal
    w_value: CReal
    w_bound: int


@dataclass
class ReductionResult:
    convergent_index: int
    q: int
    min_epsilon: CReal
    min_label: Hashable
    w_value: CReal
    w_bound: int
    case_count: int
    epsilon_per_case: list[tuple[Hashable, CReal]] | None = None
    rejected: list[RejectedConvergent] = field(default_factory=list)
    excluded: list[tuple[Hashable, str]] = field(default_factory=list)
    homogeneous: list[HomogeneousBound] = field(default_factory=list)

    @property
    def overall_w_bound(self) -> int:
        """Smallest w from which no case (generic or homogeneous) has a solution."""
        return max([self.w_bound] + [h.w_bound for h in self.homogeneous])


@dataclass
class EpsilonScan:
    """Outcome of evaluating a family at one fixed convergent."""

    index: int | None
    q: int
    checked: int
    case_count: int
    all_positive: bool
    nonpositive: int
    first_failure: tuple[Hashable, CReal] | None
    min_epsilon: CReal | None
    min_label: Hashable | None
    epsilon_per_case: list[tuple[Hashable, CReal]] | None = None
    skipped: list[tuple[Hashable, str]] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Generic certified epsilon
# ---------------------------------------------------------------------------


def epsilon(tau, mu, q: int, M: int, precision: int | None = None) -> CReal:
    """Enclosure of ||mu q|| - M ||tau q|| whose sign is certified.

    The result has ``lo > 0`` or ``hi <= 0``; if no precision up to the cap
    achieves that, :class:`UndecidableSign` is raised.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if M < 0:
        raise ValueError("M must be >= 0")
    tau, mu = as_expr(tau), as_expr(mu)
    start = max(precision or default_precision(), (M * q).bit_length() + 64)
    cap = max(max_precision(), start)
    for prec in precision_schedule(start, cap):
        try:
            dmu = nearest_int_distance(mu.enclose(prec) * q)
            dtau = nearest_int_distance(tau.enclose(prec) * q)
        except UndecidableSign:
            continue
        eps = dmu - dtau * M
        if eps.lo > 0 or eps.hi <= 0:
            return eps
    raise UndecidableSign(f"sign of epsilon undecided at q={q}")


# ---------------------------------------------------------------------------
# Fixed-point kernel
# ---------------------------------------------------------------------------


def _floor_scaled(v: mpfr, bits: int, sign: int = 1) -> int:
    """floor(sign * v * 2^bits) for a finite mpfr, without rounding."""
    m, e = v.as_mantissa_exp()
    s = int(e) + bits
    m = sign * int(m)
    return m << s if s >= 0 else m >> -s


def _ceil_scaled(v: mpfr, bits: int) -> int:
    # negate the mantissa, not the mpfr: unary minus would round to the context precision
    return -_floor_scaled(v, bits, -1)


def _dist_range(x: int, width: int, bits: int) -> tuple[int, int]:
    """Exact range of ||t|| * 2^bits for t * 2^bits in [x, x + width]."""
    one = 1 << bits
    half = one >> 1
    if width >= half:
        return 0, half
    f = x & (one - 1)
    g = f + width
    lo = 0 if (f == 0 or g >= one) else min(f, one - g)
    if f <= half <= g:
        hi = half
    elif g < half:
        hi = g
    else:
        hi = max(one - f, g - one)
    return lo, hi


class _Kernel:
    """Fixed-point evaluation of epsilon for one problem."""

    def __init__(self, problem: ReductionProblem, q_max: int):
        self.problem = problem
        self.M = problem.M
        qbits = q_max.bit_length()
        self.bm = qbits + 64
        self.bt = qbits + self.M.bit_length() + 64
        prec = self.bt + 16
        t = problem.tau.enclose(prec)
        self.t_lo = _floor_scaled(t.lo, self.bt)
        self.t_w = _ceil_scaled(t.hi, self.bt) - self.t_lo
        self.q_max = q_max
        self._extra = 0

    def covers(self, q: int) -> bool:
        return q <= self.q_max

    def mu_fixed(self, mu: Expr) -> tuple[int, int]:
        # extra bits for |mu| > 1 are learned from earlier cases to save an evaluation
        prec = self.bm + 16
        while True:
            e = mu.enclose(prec + self._extra)
            mag = max(abs(e.lo), abs(e.hi))
            extra = gmpy2.get_exp(mag) + 1 if mag > 1 else 0
            if extra > self._extra:
                self._extra = extra
                e = mu.enclose(prec + extra)
            lo = _floor_scaled(e.lo, self.bm)
            w = _ceil_scaled(e.hi, self.bm) - lo
            if w <= 16 or prec > max_precision():
                return lo, w
            prec *= 2

    def tau_dist(self, q: int) -> tuple[int, int]:
        return _dist_range(self.t_lo * q, self.t_w * q, self.bt)

    def eps_bounds(self, mu_lo: int, mu_w: int, q: int, td: tuple[int, int]) -> tuple[int, int]:
        """(lower, upper) of eps * 2^bt."""
        d_lo, d_hi = _dist_range(mu_lo * q, mu_w * q, self.bm)
        shift = self.bt - self.bm
        return (d_lo << shift) - self.M * td[1], (d_hi << shift) - self.M * td[0]

    def to_creal(self, lo: int, hi: int) -> CReal:
        den = 1 << self.bt
        return CReal.from_bounds(Fraction(lo, den), Fraction(hi, den), self.bt + 8)


def _classify(case: MuCase) -> str:
    if case.excluded is not None:
        return "excluded"
    if case.homogeneous is not None:
        return "homogeneous"
    return "active"


# ---------------------------------------------------------------------------
# Convergent sources
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=32)
def _cf_for(key: str) -> ContinuedFraction:
    return ContinuedFraction(_CF_EXPRS[key])


_CF_EXPRS: dict[str, Expr] = {}


def continued_fraction_of(tau: Expr) -> ContinuedFraction:
    """Shared (cached) expansion, keyed by the expression's text."""
    key = repr(tau)
    _CF_EXPRS.setdefault(key, tau)
    return _cf_for(key)


def first_eligible_index(tau: Expr, M: int) -> int:
    """Index of the first convergent of tau with q > 6M."""
    return continued_fraction_of(tau).first_exceeding(6 * M).index


# ---------------------------------------------------------------------------
# Reduction
# ---------------------------------------------------------------------------

KEEP_PER_CASE = 10_000


def _w_from_eps(A: Expr, B: Expr, q: int, eps: CReal) -> tuple[CReal, int]:
    """Enclosure of log(A q / eps) / log B and the smallest integer above it."""
    for prec in precision_schedule(max(default_precision(), eps.prec)):
        eps_lo = CReal(eps.lo, eps.lo, eps.prec)
        v = (A.enclose(prec) * q / eps_lo).log() / B.enclose(prec).log()
        if math.floor(v.lo) == math.floor(v.hi) or prec >= max_precision():
            bound = int(math.ceil(v.hi))
            if bound == v.hi:
                bound += 1
            return v, bound
    raise AssertionError("unreachable")


def homogeneous_bound(problem: ReductionProblem, case: MuCase, cf: ContinuedFraction) -> HomogeneousBound:
    """Bound w for a case with mu = s tau + t.

    Then u tau - v + mu = (u + s) tau - (v - t) with 0 < |u + s| <= M + |s|.
    Taking N with q_{N+1} > M + |s|, the left side is at least
    delta = |q_N tau - p_N|, so no solution has w >= log(A / delta) / log B.
    """
    s, _t = case.homogeneous
    reach = problem.M + abs(s)
    nxt = cf.first_exceeding(reach)
    conv = cf.convergent(nxt.index - 1) if nxt.index > 0 else nxt
    for prec in precision_schedule(max(default_precision(), 2 * conv.q.bit_length() + 64)):
        tau = problem.tau.enclose(prec)
        delta = abs(tau * conv.q - conv.p)
        if delta.lo <= 0:
            continue
        v = (problem.A.enclose(prec) / CReal(delta.lo, delta.lo, prec)).log() / problem.B.enclose(prec).log()
        if math.floor(v.lo) == math.floor(v.hi) or prec >= max_precision():
            c = int(math.ceil(v.hi))
            bound = max(1, c + (1 if c == v.hi else 0))
            return HomogeneousBound(case.label, case.homogeneous, conv.index, nxt.q, delta, v, bound)
    raise UndecidableSign("could not bound the homogeneous case")


class _Evaluator:
    """Shared per-case evaluation with fixed-point fast path and generic fallback."""

    def __init__(self, problem: ReductionProblem, q_max: int):
        self.problem = problem
        self.kernel = _Kernel(problem, q_max)

    def case_eps(self, get_case: Callable[[], MuCase], fixed: tuple[int, int] | None, q: int, td) -> tuple[int, CReal | None, tuple[int, int] | None]:
        """Return (sign, exact_enclosure_if_fallback, fixed_bounds).

        sign is +1 for eps > 0 and -1 for eps <= 0.  ``get_case`` is only
        called when the case itself is needed, which keeps lazy families cheap.
        """
        k = self.kernel
        if fixed is None:
            fixed = k.mu_fixed(get_case().mu)
        lo, hi = k.eps_bounds(fixed[0], fixed[1], q, td)
        if lo > 0:
            return 1, None, (lo, hi)
        if hi <= 0:
            return -1, None, (lo, hi)
        eps = epsilon(self.problem.tau, get_case().mu, q, self.problem.M, k.bt + 64)
        return (1 if eps.lo > 0 else -1), eps, None


class _Tally:
    """Running minimum of eps over a pass, plus per-case values for small families.

    Fixed-point results are compared as integers (all share the scale 2^-bt);
    the rare generic fallbacks are kept aside as fractions.
    """

    def __init__(self, kernel: _Kernel, keep: bool):
        self.kernel = kernel
        self.ilo = self.ihi = None
        self.ipos = None
        self.flo = self.fhi = None
        self.fpos = None
        self.per_case: list | None = [] if keep else None

    def add(self, pos, exact: CReal | None, b: tuple[int, int] | None):
        if exact is None:
            if self.ilo is None or b[0] < self.ilo:
                self.ilo, self.ipos = b[0], pos
            if self.ihi is None or b[1] < self.ihi:
                self.ihi = b[1]
        else:
            lo, hi = exact.lower_fraction(), exact.upper_fraction()
            if self.flo is None or lo < self.flo:
                self.flo, self.fpos = lo, pos
            self.fhi = hi if self.fhi is None else min(self.fhi, hi)
        if self.per_case is not None:
            self.per_case.append((pos, exact if exact is not None else self.kernel.to_creal(*b)))

    @property
    def pos(self):
        lo, pos, _ = self._merged()
        return pos

    def _merged(self):
        den = 1 << self.kernel.bt
        cands = []
        if self.ilo is not None:
            cands.append((Fraction(self.ilo, den), self.ipos, Fraction(self.ihi, den)))
        if self.flo is not None:
            cands.append((self.flo, self.fpos, self.fhi))
        if not cands:
            return None, None, None
        lo, pos, _ = min(cands, key=lambda t: t[0])
        hi = min(t[2] for t in cands)
        return lo, pos, hi

    def minimum(self) -> CReal | None:
        lo, _, hi = self._merged()
        if lo is None:
            return None
        return CReal.from_bounds(lo, max(lo, hi), self.kernel.bt + 8)


def reduce(problem: ReductionProblem) -> ReductionResult:
    """Find the first convergent with q > 6M at which every active case has eps > 0."""
    cf = continued_fraction_of(problem.tau)
    first = cf.first_exceeding(6 * problem.M)
    k0 = first.index
    if problem.start_index is not None:
        if cf.convergent(problem.start_index).q <= 6 * problem.M:
            raise ValueError(f"convergent {problem.start_index} does not exceed 6M")
        k0 = problem.start_index

    cases = problem.cases
    q_budget = cf.convergent(k0).q << 96
    ev = _Evaluator(problem, q_budget)
    excluded: list[tuple[Hashable, str]] = []
    homogeneous: list[HomogeneousBound] = []
    active_idx = array("q")
    fixed: list[tuple[int, int]] = []
    for i in range(len(cases)):
        c = cases[i]
        kind = _classify(c)
        if kind == "excluded":
            excluded.append((c.label, c.excluded))
        elif kind == "homogeneous":
            homogeneous.append(homogeneous_bound(problem, c, cf))
        else:
            active_idx.append(i)
            fixed.append(ev.kernel.mu_fixed(c.mu))

    rejected: list[RejectedConvergent] = []
    suspects: list[int] = []  # positions into active_idx
    n = len(active_idx)
    for k in range(k0, problem.max_index + 1):
        conv = cf.convergent(k)
        q = conv.q
        if not ev.kernel.covers(q):
            ev = _Evaluator(problem, q << 96)
            fixed = [ev.kernel.mu_fixed(cases[i].mu) for i in active_idx]
        td = ev.kernel.tau_dist(q)
        failure = None
        tally = _Tally(ev.kernel, n <= KEEP_PER_CASE)
        for pos in _suspects_first(suspects, n):
            get = lambda pos=pos: cases[active_idx[pos]]
            sign, exact, b = ev.case_eps(get, fixed[pos], q, td)
            if sign < 0:
                failure = (pos, exact if exact is not None else ev.kernel.to_creal(*b), exact is not None)
                break
            tally.add(pos, exact, b)
        if failure is not None:
            pos, eps, undecided = failure
            label = cases[active_idx[pos]].label
            rejected.append(RejectedConvergent(k, q, label, eps))
            log.info("%s: convergent %d rejected by case %r (eps <= %s)", problem.name, k, label, eps.hi)
            if pos in suspects:
                suspects.remove(pos)
            suspects.insert(0, pos)
            continue
        return _finish(problem, ev, conv, cases, active_idx, tally, rejected, excluded, homogeneous)
    raise NoConvergentFound(
        f"{problem.name or 'reduction'}: no convergent up to index {problem.max_index} gives eps > 0 for every case"
    )


def _suspects_first(suspects: list[int], n: int) -> Iterator[int]:
    seen = set(suspects)
    yield from suspects
    for i in range(n):
        if i not in seen:
            yield i


def _finish(problem, ev, conv: Convergent, cases, active_idx, tally: _Tally, rejected, excluded, homogeneous) -> ReductionResult:
    k = ev.kernel
    per_case = None
    if tally.per_case is not None:
        per_case = [(cases[active_idx[pos]].label, e) for pos, e in sorted(tally.per_case, key=lambda t: t[0])]
    eps = tally.minimum()
    if eps is None:
        # every case was excluded or homogeneous: nothing to bound generically
        eps = CReal.exact(1, k.bt)
        w_value, w_bound = CReal.exact(0, k.bt), 0
        min_label = None
    else:
        w_value, w_bound = _w_from_eps(problem.A, problem.B, conv.q, eps)
        min_label = cases[active_idx[tally.pos]].label
    return ReductionResult(
        convergent_index=conv.index,
        q=conv.q,
        min_epsilon=eps,
        min_label=min_label,
        w_value=w_value,
        w_bound=w_bound,
        case_count=len(cases),
        epsilon_per_case=per_case,
        rejected=rejected,
        excluded=excluded,
        homogeneous=homogeneous,
    )


def scan_at(
    problem: ReductionProblem,
    index: int | None = None,
    stop_on_failure: bool = False,
    keep: int = KEEP_PER_CASE,
    q: int | None = None,
) -> EpsilonScan:
    """Evaluate eps for every case at one given convergent (no advancing).

    Used to reproduce a specific published computation.  Pass ``q`` instead
    of ``index`` to evaluate at an arbitrary denominator (the lemma is then
    not applicable, but the number can still be compared).  Excluded and
    homogeneous cases are skipped and listed.  With ``stop_on_failure`` the
    scan streams the family and returns at the first eps <= 0, which keeps
    very large families cheap when the answer is negative.
    """
    if (index is None) == (q is None):
        raise ValueError("give exactly one of index and q")
    if q is None:
        q = continued_fraction_of(problem.tau).convergent(index).q
    ev = _Evaluator(problem, q)
    td = ev.kernel.tau_dist(q)
    den = 1 << ev.kernel.bt
    total = len(problem.cases)
    per_case: list[tuple[Hashable, CReal]] | None = [] if total <= keep else None
    skipped: list[tuple[Hashable, str]] = []
    checked = nonpos = 0
    first_failure = None
    lo_min = hi_min = None
    min_label = None
    for i in range(total):
        c = problem.cases[i]
        kind = _classify(c)
        if kind != "active":
            skipped.append((c.label, c.excluded or f"homogeneous {c.homogeneous}"))
            continue
        sign, exact, b = ev.case_eps(lambda: c, None, q, td)
        enc = exact if exact is not None else ev.kernel.to_creal(*b)
        lo = enc.lower_fraction() if exact is not None else Fraction(b[0], den)
        hi = enc.upper_fraction() if exact is not None else Fraction(b[1], den)
        checked += 1
        if per_case is not None:
            per_case.append((c.label, enc))
        if lo_min is None or lo < lo_min:
            lo_min, min_label = lo, c.label
        hi_min = hi if hi_min is None else min(hi_min, hi)
        if sign < 0:
            nonpos += 1
            if first_failure is None:
                first_failure = (c.label, enc)
            if stop_on_failure:
                break
    min_eps = None
    if lo_min is not None:
        min_eps = CReal.from_bounds(lo_min, max(lo_min, hi_min), ev.kernel.bt + 8)
    return EpsilonScan(
        index=index,
        q=q,
        checked=checked,
        case_count=total,
        all_positive=nonpos == 0 and checked + len(skipped) == total,
        nonpositive=nonpos,
        first_failure=first_failure,
        min_epsilon=min_eps,
        min_label=min_label,
        epsilon_per_case=per_case,
        skipped=skipped,
    )


def w_threshold(A, B, q: int, eps: CReal) -> tuple[CReal, int]:
    """log(A q / eps) / log B and the smallest integer w it rules out."""
    return _w_from_eps(as_expr(A), as_expr(B), q, eps)
