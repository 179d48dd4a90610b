"""Proof reports: staged records, printed-vs-computed comparisons, serialization."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Any

from ..realnum import CReal

SCHEMA = "assocpell.proof-report/1"

STAGE_KINDS = ("initialBound", "reduction", "substitution", "sweep", "sideCondition")


# ---------------------------------------------------------------------------
# Comparisons against printed values
# ---------------------------------------------------------------------------


@dataclass
class Comparison:
    """One computed quantity held against the value printed in the source.

    Modes:
      exact      integers (or integer tuples) must be equal
      digits     the enclosure meets [p - u, p + u], u one unit in the last printed digit
      at_least   the enclosure lies strictly above the printed value
      positive   the enclosure lies strictly above 0
      factor     value within a factor ``tol`` of the printed constant
      certifies  computed upper bound <= printed value (printed bound is valid)
      info       recorded for the reader, never fails
    """

    quantity: str
    paper: str | None
    computed: Any
    mode: str
    matched: bool | None
    note: str = ""

    def to_json(self) -> dict:
        return {
            "quantity": self.quantity,
            "paper": self.paper,
            "computed": jsonable(self.computed),
            "mode": self.mode,
            "matched": self.matched,
            "note": self.note,
        }


def _lo_hi(x) -> tuple[Fraction, Fraction]:
    if isinstance(x, CReal):
        return x.lower_fraction(), x.upper_fraction()
    v = Fraction(x)
    return v, v


def compare_exact(quantity: str, paper, computed, note: str = "") -> Comparison:
    return Comparison(quantity, str(paper), computed, "exact", paper == computed, note)


def compare_digits(quantity: str, paper: str, computed, note: str = "") -> Comparison:
    p = Fraction(Decimal(paper))
    exp = Decimal(paper).as_tuple().exponent
    ulp = Fraction(10) ** exp
    if computed is None:
        return Comparison(quantity, paper, None, "digits", False, note or "no value computed")
    lo, hi = _lo_hi(computed)
    return Comparison(quantity, paper, computed, "digits", hi >= p - ulp and lo <= p + ulp, note)


def compare_at_least(quantity: str, paper: str, computed, note: str = "") -> Comparison:
    if computed is None:
        return Comparison(quantity, "> " + paper, None, "at_least", False, note or "no value computed")
    lo, _ = _lo_hi(computed)
    return Comparison(quantity, "> " + paper, computed, "at_least", lo > Fraction(Decimal(paper)), note)


def compare_positive(quantity: str, computed, note: str = "") -> Comparison:
    if computed is None:
        return Comparison(quantity, "> 0", None, "positive", False, note or "no value computed")
    lo, _ = _lo_hi(computed)
    return Comparison(quantity, "> 0", computed, "positive", lo > 0, note)


def compare_factor(quantity: str, paper: str, computed, tol: Fraction = Fraction(105, 100), note: str = "") -> Comparison:
    p = Fraction(Decimal(paper))
    lo, hi = _lo_hi(computed)
    return Comparison(quantity, paper, computed, "factor", p / tol <= lo and hi <= p * tol, note)


def compare_certifies(quantity: str, paper: str, computed, note: str = "") -> Comparison:
    _, hi = _lo_hi(computed)
    return Comparison(quantity, "< " + paper, computed, "certifies", hi <= Fraction(Decimal(paper)), note)


def info(quantity: str, computed, paper: str | None = None, note: str = "") -> Comparison:
    return Comparison(quantity, paper, computed, "info", None, note)


# ---------------------------------------------------------------------------
# Report model
# ---------------------------------------------------------------------------


@dataclass
class StageRecord:
    kind: str
    name: str
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    paper_value: str | None = None
    comparisons: list[Comparison] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in STAGE_KINDS:
            raise ValueError(f"unknown stage kind {self.kind!r}")

    @property
    def matched(self) -> bool | None:
        verdicts = [c.matched for c in self.comparisons if c.matched is not None]
        if not verdicts:
            return None
        return all(verdicts)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "name": self.name,
            "inputs": jsonable(self.inputs),
            "outputs": jsonable(self.outputs),
            "paperValue": self.paper_value,
            "matched": self.matched,
            "comparisons": [c.to_json() for c in self.comparisons],
            "notes": list(self.notes),
        }


@dataclass
class Discrepancy:
    """``documented``: known misprint, reported but accepted.
    ``mismatch``: a paper-paired value that failed its comparison.
    ``note``: an observation about the printed argument that does not change a paired value.
    """

    kind: str
    stage: str
    quantity: str
    paper: str | None
    computed: Any
    note: str = ""

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "stage": self.stage,
            "quantity": self.quantity,
            "paper": self.paper,
            "computed": jsonable(self.computed),
            "note": self.note,
        }


@dataclass
class ProofReport:
    theorem_id: str
    stages: list[StageRecord] = field(default_factory=list)
    final_solutions: list = field(default_factory=list)
    discrepancies: list[Discrepancy] = field(default_factory=list)
    assumptions: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)

    def add(self, stage: StageRecord) -> StageRecord:
        self.stages.append(stage)
        for c in stage.comparisons:
            if c.matched is False:
                self.discrepancies.append(
                    Discrepancy("mismatch", stage.name, c.quantity, c.paper, c.computed, c.note)
                )
        return stage

    def note(self, stage: str, quantity: str, paper, computed, text: str, kind: str = "note") -> None:
        self.discrepancies.append(Discrepancy(kind, stage, quantity, paper, computed, text))

    @property
    def mismatches(self) -> list[Discrepancy]:
        return [d for d in self.discrepancies if d.kind == "mismatch"]

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.errors

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "theoremId": self.theorem_id,
            "ok": self.ok,
            "stages": [s.to_json() for s in self.stages],
            "finalSolutions": jsonable(self.final_solutions),
            "discrepancies": [d.to_json() for d in self.discrepancies],
            "assumptions": list(self.assumptions),
            "errors": list(self.errors),
        }


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def fmt_creal(x: CReal, digits: int = 12) -> dict:
    """Outward-rounded decimal endpoints: displayed bounds only ever loosen."""
    return {"lo": "{0:.{1}Dg}".format(x.lo, digits), "hi": "{0:.{1}Ug}".format(x.hi, digits)}


def jsonable(v):
    if isinstance(v, CReal):
        return fmt_creal(v)
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, float):
        return v if math.isfinite(v) else str(v)
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if hasattr(v, "to_json"):
        return v.to_json()
    return str(v)


def _short(v) -> str:
    j = jsonable(v)
    if isinstance(j, dict) and set(j) == {"lo", "hi"}:
        if j["lo"] == j["hi"]:
            return j["lo"]
        return f"[{j['lo']}, {j['hi']}]"
    if isinstance(j, (dict, list)):
        return json.dumps(j, separators=(",", ":"))
    return str(j)


def _table(rows: list[list[str]], header: list[str]) -> list[str]:
    widths = [max(len(r[i]) for r in rows + [header]) for i in range(len(header))]
    line = lambda r: "  " + " | ".join(c.ljust(w) for c, w in zip(r, widths))
    out = [line(header), "  " + "-+-".join("-" * w for w in widths)]
    out.extend(line(r) for r in rows)
    return out


def render_text(r: ProofReport) -> str:
    out = [f"Proof report {r.theorem_id}  ({SCHEMA})", f"status: {'OK' if r.ok else 'MISMATCHES'}", ""]
    if r.assumptions:
        out.append("Assumptions:")
        out.extend(f"  - {a}" for a in r.assumptions)
        out.append("")
    for i, s in enumerate(r.stages, 1):
        flag = {True: "matched", False: "MISMATCH", None: "-"}[s.matched]
        out.append(f"[{i}] {s.kind}: {s.name}  ({flag})")
        for k, v in s.inputs.items():
            out.append(f"    in  {k} = {_short(v)}")
        for k, v in s.outputs.items():
            out.append(f"    out {k} = {_short(v)}")
        if s.comparisons:
            rows = [
                [c.quantity, c.paper or "", _short(c.computed), c.mode, {True: "yes", False: "NO", None: "-"}[c.matched]]
                for c in s.comparisons
            ]
            out.extend(_table(rows, ["quantity", "paper", "computed", "mode", "ok"]))
        for n in s.notes:
            out.append(f"    note: {n}")
        out.append("")
    out.append(f"Final solutions ({len(r.final_solutions)}):")
    if r.final_solutions:
        keys = list(r.final_solutions[0].keys())
        rows = [[_short(sol[k]) for k in keys] for sol in r.final_solutions]
        out.extend(_table(rows, keys))
    out.append("")
    out.append(f"Discrepancies ({len(r.discrepancies)}):")
    for d in r.discrepancies:
        out.append(f"  - [{d.kind}] {d.stage}: {d.quantity}: printed {d.paper}, computed {_short(d.computed)}. {d.note}".rstrip())
    if r.errors:
        out.append("")
        out.append("Errors:")
        out.extend(f"  - {e}" for e in r.errors)
    return "\n".join(out) + "\n"


def emit_report(r: ProofReport, format: str = "json") -> str:
    if format == "json":
        return json.dumps(r.to_json(), indent=2) + "\n"
    if format == "text":
        return render_text(r)
    raise ValueError(f"unknown format {format!r}")
