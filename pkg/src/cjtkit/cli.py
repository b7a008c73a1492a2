"""Command-line front end.

Exit codes: 0 success, 2 malformed input, 3 violated mathematical
precondition, 4 exhausted search or computation budget.  Errors are printed
to stderr as a JSON object ``{"error": {...}}``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .cjt import Budget, LocusEmptyError, check_constant_jordan_type, locus_by_name
from .exactalg import QQ, BudgetExceededError, parse_field, parse_rational
from .fileformats import SchemaError, load_quiver, load_rep
from .flows import EmptySemistableLocus, SamplingBudgetError, enumerate_flow_points
from .homprops import (
    FinjPreconditionError,
    LevelGapError,
    check_EIP,
    check_EKP,
    injective_jtype_table,
)
from .jordan import JordanType, generic_jordan_type, profile_at
from .quiver import CycleError, QuiverError
from .sheaves import UnsupportedQuiverError, WindowTooSmallError, hilbert_table, splitting_type

REPORT_SCHEMA = "cjt-report/1"

EXIT_SCHEMA = 2
EXIT_PRECONDITION = 3
EXIT_BUDGET = 4


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code = code
        self.kind = kind


def _classify(exc: BaseException) -> CliError:
    if isinstance(exc, CliError):
        return exc
    if isinstance(exc, (EmptySemistableLocus, CycleError, UnsupportedQuiverError, FinjPreconditionError,
                        LevelGapError)):
        return CliError(EXIT_PRECONDITION, type(exc).__name__, str(exc))
    if isinstance(exc, (LocusEmptyError, SamplingBudgetError, BudgetExceededError, WindowTooSmallError)):
        return CliError(EXIT_BUDGET, type(exc).__name__, str(exc))
    if isinstance(exc, (SchemaError, QuiverError)):
        return CliError(EXIT_SCHEMA, type(exc).__name__, str(exc))
    return None


# -- argument helpers ----------------------------------------------------------------


def parse_point(text: str, arrows) -> dict:
    """``a1=1,a2=-1/2`` -> exact values; every arrow must be assigned."""
    out = {}
    for part in text.split(","):
        if not part.strip():
            continue
        if "=" not in part:
            raise CliError(EXIT_SCHEMA, "BadPoint", f"expected arrow=value, got {part!r}")
        k, v = part.split("=", 1)
        k = k.strip()
        if k not in arrows:
            raise CliError(EXIT_SCHEMA, "BadPoint", f"unknown arrow {k!r}")
        try:
            out[k] = parse_rational(v.strip())
        except (TypeError, ValueError) as exc:
            raise CliError(EXIT_SCHEMA, "BadPoint", str(exc)) from None
    missing = [a for a in arrows if a not in out]
    if missing:
        raise CliError(EXIT_SCHEMA, "BadPoint", f"no value for arrows {missing}")
    return out


def parse_window(text: str) -> tuple:
    try:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
    except ValueError:
        raise CliError(EXIT_SCHEMA, "BadWindow", f"window must look like A..B, got {text!r}") from None
    if lo < 0 or hi < lo:
        raise CliError(EXIT_SCHEMA, "BadWindow", "window needs 0 <= A <= B")
    return lo, hi


def parse_vector(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise CliError(EXIT_SCHEMA, "BadTarget", f"target must be comma-separated integers, got {text!r}") from None


def field_name(field) -> str:
    return "q" if field == QQ else f"fp:{field.p}"


# -- commands --------------------------------------------------------------------------


def cmd_flows(args, ctx):
    fb = enumerate_flow_points(ctx["quiver"], ctx["weight"])
    res = fb.to_json()
    res["arrows"] = list(fb.variables)
    lines = [f"flow points ({len(fb)}), arc bound B = {fb.bound}, arrows {', '.join(fb.variables)}:"]
    lines += ["  (" + ", ".join(str(x) for x in r) + ")" for r in fb.points]
    return res, lines


def cmd_jtype(args, ctx):
    q, fb, M, field = ctx["quiver"], ctx["fb"], ctx["rep"], ctx["field"]
    if args.at is not None:
        pt = parse_point(args.at, q.arrow_ids)
        prof = profile_at(M, fb, pt, field)
        t = prof.jordan_type()
        res = {"mode": "point", "point": {a: QQ.to_json(v) for a, v in pt.items()},
               "jtype": t.to_json(), "profile": prof.to_json()}
        lines = [f"Jordan type {t}", f"rank profile {list(prof.ranks)}"]
    else:
        if args.seed is None:
            raise CliError(EXIT_SCHEMA, "MissingSeed", "--generic needs --seed")
        g = generic_jordan_type(M, fb, args.samples, args.seed, field)
        res = {"mode": "generic", "samples": g.samples, "jtype": g.jtype.to_json(),
               "profile": g.profile.to_json(), "failure_bound": str(g.failure_bound)}
        lines = [f"generic Jordan type {g.jtype}", f"rank profile {list(g.profile.ranks)}",
                 f"samples {g.samples}, failure probability <= {_short(g.failure_bound)}"]
    return res, lines


def _short(fr) -> str:
    s = str(fr)
    if len(s) <= 40:
        return s
    return f"2^-{max(0, fr.denominator.bit_length() - fr.numerator.bit_length())} (approximately)"


def cmd_cjt(args, ctx):
    fb, M, field = ctx["fb"], ctx["rep"], ctx["field"]
    budget = Budget(per_stratum=args.per_stratum, dense=args.dense, generic=args.samples)
    v = check_constant_jordan_type(M, fb, locus_by_name(args.locus), budget, args.seed, field, args.certify)
    res = v.to_json()
    res["locus"] = args.locus
    if v.kind == "NotConstant":
        lines = [
            "NOT constant Jordan type",
            f"  witness   {_pt(v.witness)}: {v.witness_jtype}  profile {list(v.witness_profile.ranks)}",
            f"  reference {_pt(v.reference)}: {v.generic_jtype}  profile {list(v.generic_profile.ranks)}",
            f"  found by {v.stage} search",
        ]
    elif v.kind == "CertifiedConstant":
        lines = [f"CERTIFIED constant Jordan type {v.jtype} on the semistable locus",
                 f"  {len(v.certificates)} rank certificate{'' if len(v.certificates) == 1 else 's'}"]
    else:
        lines = [f"probably constant Jordan type {v.jtype} (locus {args.locus})",
                 f"  {v.samples_used} points examined, failure probability <= {_short(v.failure_bound)}"]
        for r in v.refusals:
            lines.append(f"  certification refused for i={r.i}: {r.reason} {r.detail}".rstrip())
    return res, lines


def _pt(p) -> str:
    return "(" + ", ".join(f"{k}={v}" for k, v in p.items()) + ")"


def cmd_prop(args, ctx):
    fb, M, field = ctx["fb"], ctx["rep"], ctx["field"]
    check = check_EIP if args.command == "eip" else check_EKP
    budget = Budget(per_stratum=args.per_stratum, dense=args.dense, generic=args.samples)
    v = check(M, fb, locus_by_name(args.locus), budget, args.seed, field)
    res = v.to_json()
    res["locus"] = args.locus
    prop = v.prop
    if v.holds:
        lines = [f"{prop} holds at all {v.samples_used} examined points (locus {args.locus})",
                 f"  failure probability <= {_short(v.failure_bound)}"]
    else:
        lines = [f"{prop} FAILS at {_pt(v.witness)} for l = {v.failing_l}"]
    for p, rows in v.tables:
        lines.append(f"  at {_pt(p)}:")
        for h in rows:
            lines.append(f"    l={h.l}: hom={h.hom} ext1={h.ext1} rank={h.rank}")
    return res, lines


def cmd_sheaf(args, ctx):
    M, field = ctx["rep"], ctx["field"]
    window = parse_window(args.window) if args.window else None
    rng = range(window[0], window[1] + 1) if window else None
    table = hilbert_table(M, args.i, args.j, rng, field)
    res = {"hilbert": table.to_json()}
    lines = [f"Hilbert function of F_{{{args.i},{args.j}}}:"]
    lines.append("  " + " ".join(f"{d}:{table.values[d]}" for d in table.degrees))
    if args.j == 0:
        st = splitting_type(M, args.i, window, field)
        res["splitting_type"] = st.to_json()
        lines.append(f"splitting type {st}")
        if st.torsion_degrees:
            lines.append(f"  torsion in degrees {st.torsion_degrees}")
    else:
        lines.append("(splitting type is computed for j = 0; F_{i,j} is F_i twisted by j)")
    return res, lines


def cmd_jtable(args, ctx):
    q, fb, field = ctx["quiver"], ctx["fb"], ctx["field"]
    table = injective_jtype_table(q, fb, locus_by_name("vinj"), 3, args.seed, field)
    res = {"table": table.to_json(), "rows": [t.to_json() for t in table.rows]}
    lines = ["injective Jordan types (row l: I(x_l), columns a_1..a_L):"]
    for x, t in zip(table.vertices, table.rows):
        lines.append(f"  I({x}): {list(t.a)}  {t}")
    if args.target is not None:
        v = parse_vector(args.target)
        if len(v) != table.L:
            raise CliError(EXIT_SCHEMA, "BadTarget", f"target needs {table.L} entries")
        coeffs, t = table.realize(v)
        res["target"] = {"vector": v, "coefficients": dict(zip(table.vertices, coeffs)),
                         "jtype": JordanType(v).to_json()}
        lines.append("target " + str(v) + " = " + " + ".join(
            f"({c})*I({x})" for c, x in zip(coeffs, table.vertices)))
    return res, lines


COMMANDS = {"flows": cmd_flows, "jtype": cmd_jtype, "cjt": cmd_cjt, "eip": cmd_prop, "ekp": cmd_prop,
            "sheaf": cmd_sheaf, "jtable": cmd_jtable}


# -- parser -------------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        _emit_error(CliError(EXIT_SCHEMA, "UsageError", message))
        sys.exit(EXIT_SCHEMA)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cjtkit", description="Jordan types of quiver representations.")
    p.add_argument("--version", action="version", version=f"cjtkit {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="fp", help="q (rationals), fp (default prime) or fp:<prime>")
    common.add_argument("--json", action="store_true", help="print the JSON report instead of text")
    common.add_argument("--out", metavar="FILE", help="also write the JSON report to FILE")
    common.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("flows", parents=[common], help="list the flow points")
    s.add_argument("quiver")

    s = sub.add_parser("jtype", parents=[common], help="Jordan type at a point or generically")
    s.add_argument("quiver")
    s.add_argument("rep")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--at", metavar="a1=V,...", help="evaluate at this point")
    g.add_argument("--generic", action="store_true", help="generic type from random samples")
    s.add_argument("--samples", type=int, default=20)
    s.add_argument("--seed", type=int)

    s = sub.add_parser("cjt", parents=[common], help="decide constant Jordan type")
    s.add_argument("quiver")
    s.add_argument("rep")
    s.add_argument("--locus", choices=["v", "vinj"], default="v")
    s.add_argument("--certify", action="store_true", help="try an exact certificate (small inputs)")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--samples", type=int, default=20)
    s.add_argument("--per-stratum", type=int, default=200)
    s.add_argument("--dense", type=int, default=1000)

    for name in ("eip", "ekp"):
        s = sub.add_parser(name, parents=[common], help=f"test the {name.upper()} property")
        s.add_argument("quiver")
        s.add_argument("rep")
        s.add_argument("--locus", choices=["v", "vinj"], default="vinj")
        s.add_argument("--seed", type=int, required=True)
        s.add_argument("--samples", type=int, default=20)
        s.add_argument("--per-stratum", type=int, default=50)
        s.add_argument("--dense", type=int, default=200)

    s = sub.add_parser("sheaf", parents=[common], help="Hilbert function and splitting type (Kronecker)")
    s.add_argument("quiver")
    s.add_argument("rep")
    s.add_argument("--i", type=int, required=True)
    s.add_argument("--j", type=int, default=0)
    s.add_argument("--window", metavar="A..B")

    s = sub.add_parser("jtable", parents=[common], help="Jordan types of injectives and virtual realization")
    s.add_argument("quiver")
    s.add_argument("--target", metavar="v1,...,vL")
    s.add_argument("--seed", type=int, required=True)
    return p


def _emit_error(err: CliError):
    doc = {"error": {"type": err.kind, "message": str(err), "exit_code": err.code}}
    sys.stderr.write(json.dumps(doc, sort_keys=True) + "\n")


def dumps(report) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        try:
            field = parse_field(args.field)
        except ValueError as exc:
            raise CliError(EXIT_SCHEMA, "BadField", str(exc)) from None
        q, w, qdoc = load_quiver(args.quiver)
        ctx = {"quiver": q, "weight": w, "field": field}
        inputs = {"quiver": qdoc}
        if args.command != "flows":
            ctx["fb"] = enumerate_flow_points(q, w)
        if hasattr(args, "rep"):
            M, rdoc = load_rep(q, args.rep)
            ctx["rep"] = M
            inputs["rep"] = rdoc
        result, lines = COMMANDS[args.command](args, ctx)
    except Exception as exc:  # mapped to the exit-code contract below
        err = _classify(exc)
        if err is None:
            raise
        _emit_error(err)
        return err.code
    report = {
        "schema": REPORT_SCHEMA,
        "command": args.command,
        "argv": argv,
        "inputs": inputs,
        "seed": getattr(args, "seed", None),
        "field": field_name(field),
        "result": result,
    }
    if args.timing:
        report["timing"] = {"seconds": f"{time.perf_counter() - start:.3f}"}
    text = dumps(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.json:
        sys.stdout.write(text)
    else:
        sys.stdout.write("\n".join(lines) + "\n")
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
