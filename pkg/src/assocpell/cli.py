"""Command-line interface: ``assocpell <command> ...`` (or ``python3 -m assocpell``)."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__
from .realnum import UndecidableSign, default_precision, parse_expr


def _frac(text: str) -> Fraction:
    """Exact rational from ``12``, ``0.5``, ``3/4`` or ``3.2e30``."""
    try:
        if "e" in text.lower() and "/" not in text:
            from decimal import Decimal

            return Fraction(Decimal(text))
        return Fraction(text)
    except (ValueError, ArithmeticError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _big_int(text: str) -> int:
    v = _frac(text)
    if v.denominator != 1:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(v)


def _dump(obj) -> None:
    from .pipeline.report import jsonable

    json.dump(jsonable(obj), sys.stdout, indent=2)
    sys.stdout.write("\n")


# -- seq / repdigit ----------------------------------------------------------


def cmd_seq(args) -> int:
    from .sequences import assoc_pell

    print(assoc_pell(args.n))
    return 0


def cmd_repdigit(args) -> int:
    from .repdigits import decompose_blocks

    p = decompose_blocks(args.n)
    print(" ".join(f"{d}x{m}" for d, m in p.blocks))
    return 0


# -- cfrac ---------------------------------------------------------------


def cmd_cfrac(args) -> int:
    from .cfrac import ContinuedFraction

    cf = ContinuedFraction(parse_expr(args.expr))
    quotients = cf.quotients(args.terms)
    convs = cf.convergents(len(quotients))
    if args.json:
        _dump({"quotients": quotients, "convergents": [{"index": c.index, "p": c.p, "q": c.q} for c in convs]})
        return 0
    print("quotients:", " ".join(map(str, quotients)))
    for c in convs:
        print(f"{c.index:4d}  {c.p}/{c.q}")
    return 0


# -- bound -------------------------------------------------------------------


def _algebraic(obj):
    from .linforms import ALPHA_NUMBER, QuadraticNumber, RationalNumber

    if obj is None:
        return None
    if obj == "alpha":
        return ALPHA_NUMBER
    if isinstance(obj, (int, str)):
        return RationalNumber(_frac(str(obj)))
    if "rational" in obj:
        return RationalNumber(_frac(str(obj["rational"])))
    if "quadratic" in obj:
        return QuadraticNumber(*obj["quadratic"])
    raise ValueError(f"cannot read algebraic number {obj!r}")


def load_spec(data: dict):
    """LinearFormSpec from JSON such as

    {"degree": 2, "D": 100, "terms": [{"A": "log(alpha)", "gamma": "alpha", "b": 3}, ...]}

    ``A`` is an expression string or number, ``gamma`` is ``"alpha"``, a
    rational (``"2/9"``), ``{"rational": ...}`` or ``{"quadratic": [a0, a1, a2, root]}``.
    """
    from .linforms import LinearFormSpec, LinearFormTerm

    terms = []
    for t in data["terms"]:
        A = t["A"]
        A = parse_expr(A) if isinstance(A, str) else _frac(str(A))
        terms.append(LinearFormTerm(A, _algebraic(t.get("gamma")), t.get("b"), t.get("label", "")))
    D = data.get("D")
    return LinearFormSpec(int(data["degree"]), terms, None if D is None else _big_int(str(D)))


def cmd_bound_matveev(args) -> int:
    from .linforms import matveev_bound, matveev_coefficient

    text = args.spec
    if not text.lstrip().startswith("{"):
        with open(text) as fh:
            text = fh.read()
    spec = load_spec(json.loads(text))
    spec.check()
    out = {"coefficient": matveev_coefficient(spec, printed_degree_factor=args.printed_degree_factor)}
    if spec.D is not None:
        out["bound"] = matveev_bound(spec, printed_degree_factor=args.printed_degree_factor)
    _dump(out)
    return 0


def cmd_bound_logsolve(args) -> int:
    from .linforms import LogBoundProblem, solve_log_bound

    H = parse_expr(args.H)
    _dump({"r": args.r, "H": H.enclose(default_precision()), "bound": solve_log_bound(LogBoundProblem(args.r, H))})
    return 0


# -- reduce ------------------------------------------------------------------


def cmd_reduce(args) -> int:
    from .pipeline.common import reduction_outputs
    from .reduction import MuCase, NoConvergentFound, ReductionProblem, reduce

    excluded = set()
    for part in args.exclude or []:
        excluded.update(int(x) for x in part.split(",") if x)
    cases = [
        MuCase(i, parse_expr(m), excluded="excluded on the command line" if i in excluded else None)
        for i, m in enumerate(args.mu)
    ]
    problem = ReductionProblem(parse_expr(args.tau), cases, args.A, parse_expr(args.B), args.M, name="cli")
    try:
        r = reduce(problem)
    except NoConvergentFound as exc:
        _dump({"error": "NO_CONVERGENT_FOUND", "message": str(exc)})
        return 2
    out = reduction_outputs(r)
    out["epsilonPerCase"] = [{"case": lab, "epsilon": e} for lab, e in (r.epsilon_per_case or [])]
    out["excluded"] = [{"case": lab, "reason": why} for lab, why in r.excluded]
    _dump(out)
    return 0


# -- search --------------------------------------------------------------


def cmd_search(args) -> int:
    from . import search

    t0 = time.perf_counter()
    if args.equation == "eq3":
        sols = search.solve_eq3(args.nmax)
        rows = [{"n": s.n, "m": s.m, "d": s.d, "k": s.k} for s in sols]
        lines = [f"({s.n},{s.m},{s.d},{s.k})  q_{s.n} - q_{s.m} = {s.d * (10 ** s.k - 1) // 9}" for s in sols]
    elif args.equation == "eq4":
        sols = search.solve_eq4(args.nmax)
        rows = [{"n": s.n, "value": s.value, "blocks": [list(b) for b in s.pattern.blocks]} for s in sols]
        lines = [f"q_{s.n} = {s.value}" for s in sols]
    else:
        res = search.solve_eq5(args.kmax, args.nmax)

        def row(s):
            return {"k": s.k, "value": s.value, "n": s.n, "m": s.m, "d1": s.d1, "d2": s.d2}

        rows = {
            "values": res.values,
            "strictValues": res.strict_values,
            "solutions": [row(s) for s in res.solutions],
            "degenerate": [row(s) for s in res.degenerate],
        }

        def fmt(s):
            return f"q_{s.k} = {s.value} = {str(s.d1) * s.n} - {str(s.d2) * s.m}"

        lines = [fmt(s) for s in res.solutions]
        lines += ["degenerate (n = m):"] + ["  " + fmt(s) for s in res.degenerate]
    elapsed = time.perf_counter() - t0
    if args.json:
        _dump({"equation": args.equation, "solutions": rows, "seconds": round(elapsed, 4)})
    else:
        print("\n".join(lines))
    return 0


# -- prove -------------------------------------------------------------------


def cmd_prove(args) -> int:
    if args.precision:
        os.environ["ASSOCPELL_PRECISION"] = str(args.precision)
    from .pipeline import emit_report, prove_thm3, prove_thm4, prove_thm5

    fn = {"thm3": prove_thm3, "thm4": prove_thm4, "thm5": prove_thm5}[args.theorem]
    try:
        report = fn(sweep_limit=args.sweep_limit)
    except UndecidableSign as exc:
        print(f"UNDECIDABLE_SIGN: {exc}", file=sys.stderr)
        return 3
    sys.stdout.write(emit_report(report, "json" if args.json else "text"))
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="assocpell", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("seq", help="associated Pell numbers")
    ss = s.add_subparsers(dest="what", required=True)
    q = ss.add_parser("q", help="print q_n")
    q.add_argument("n", type=int)
    q.set_defaults(func=cmd_seq)

    r = sub.add_parser("repdigit", help="repdigit blocks")
    rs = r.add_subparsers(dest="what", required=True)
    d = rs.add_parser("decompose", help="maximal equal-digit runs, printed as digit x length")
    d.add_argument("n", type=int)
    d.set_defaults(func=cmd_repdigit)

    c = sub.add_parser("cfrac", help="certified continued fraction of an expression")
    c.add_argument("expr", help="e.g. 'log(10)/log(alpha)'")
    c.add_argument("--terms", type=int, default=10)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_cfrac)

    b = sub.add_parser("bound", help="Matveev bound and log-bound solver")
    bs = b.add_subparsers(dest="what", required=True)
    m = bs.add_parser("matveev")
    m.add_argument("--spec", required=True, help="JSON text or a path to a JSON file")
    m.add_argument("--printed-degree-factor", action="store_true", help="use d^2 (1 + log d^2)")
    m.set_defaults(func=cmd_bound_matveev)
    ls = bs.add_parser("logsolve", help="bound L from L / (log L)^r < H")
    ls.add_argument("-r", type=int, required=True)
    ls.add_argument("-H", required=True, help="expression, e.g. '1.9e26/log(alpha)'")
    ls.set_defaults(func=cmd_bound_logsolve)

    red = sub.add_parser("reduce", help="Baker-Davenport reduction, JSON output")
    red.add_argument("--tau", required=True)
    red.add_argument("--mu", required=True, nargs="+", help="one expression per case")
    red.add_argument("-A", type=_frac, required=True)
    red.add_argument("-B", required=True, help="expression, e.g. 10 or alpha")
    red.add_argument("-M", type=_big_int, required=True)
    red.add_argument("--exclude", action="append", help="comma-separated 0-based case positions to skip")
    red.set_defaults(func=cmd_reduce)

    se = sub.add_parser("search", help="exhaustive solution oracles")
    ses = se.add_subparsers(dest="equation", required=True)
    for name in ("eq3", "eq4"):
        e = ses.add_parser(name)
        e.add_argument("--nmax", type=int, required=True)
        e.add_argument("--json", action="store_true")
        e.set_defaults(func=cmd_search)
    e = ses.add_parser("eq5")
    e.add_argument("--kmax", type=int, required=True)
    e.add_argument("--nmax", type=int, default=None, help="longest repdigit (default kmax + 5)")
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_search)

    pr = sub.add_parser("prove", help="run a theorem pipeline and report")
    pr.add_argument("theorem", choices=["thm3", "thm4", "thm5"])
    pr.add_argument("--json", action="store_true")
    pr.add_argument("--precision", type=int, help="starting precision in bits")
    pr.add_argument("--sweep-limit", type=int, default=None)
    pr.set_defaults(func=cmd_prove)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UndecidableSign as exc:
        print(f"UNDECIDABLE_SIGN: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
