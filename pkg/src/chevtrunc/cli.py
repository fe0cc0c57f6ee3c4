"""Command-line interface: ``chevtrunc <subcommand> [flags]``, JSON on stdout.

Exit codes: 0 pass, 1 verification failure or rejected input, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from . import acceptance
from .arithcoh import (
    ReductiveWeight,
    annihilation_check,
    coset_reps,
    free_generators,
    h1_cardinality,
    hecke_on_h1,
    integrality_check,
    load_generators,
)
from .hwmod import DimensionCapExceeded, HighestWeightLattice, weyl_dimension
from .pbw import kostant_form, parse_expression
from .rootsys import root_system
from .slopes import HypothesisViolation, prop65_pipeline, uniform_bound
from .trunc import (
    HypothesisError,
    TruncationSpec,
    build_truncation,
    local_constancy_check,
    phi_isomorphism,
    s_invariance_check,
)

log = logging.getLogger("chevtrunc")

SAFE_INT = 2 ** 53


class UsageError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


def _json(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) >= SAFE_INT else obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


# -------------------------------------------------------------- parsing

def _weight(text: str, flag: str, rank: int) -> tuple:
    try:
        w = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(flag, f"expected comma-separated integers, got {text!r}") from None
    if len(w) != rank:
        raise UsageError(flag, f"expected {rank} coordinates, got {len(w)}")
    if any(x < 0 for x in w):
        raise UsageError(flag, "weight must be dominant")
    return w


def _rational(text: str, flag: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(flag, f"expected a rational like 1 or 3/2, got {text!r}") from None


def _k_range(text: str) -> range:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise UsageError("--k-range", f"expected lo:hi, got {text!r}") from None
    if lo < 0 or hi < lo:
        raise UsageError("--k-range", "need 0 <= lo <= hi")
    return range(lo, hi + 1)


def _root_system(label: str):
    try:
        return root_system(label)
    except (ValueError, KeyError) as exc:
        raise UsageError("--type", str(exc)) from None


def _spec(args) -> TruncationSpec:
    try:
        return TruncationSpec(args.p, args.r)
    except ValueError as exc:
        raise UsageError("-p/-r", str(exc)) from None


def _moved(text: str, rank: int) -> tuple:
    out = []
    for tok in text.split(","):
        tok = tok.strip().lower()
        if not tok.startswith("a") or not tok[1:].isdigit() or not 1 <= int(tok[1:]) <= rank:
            raise UsageError("--moved", f"expected simple roots a1..a{rank}, got {tok!r}")
        out.append(int(tok[1:]) - 1)
    return tuple(out)


# -------------------------------------------------------------- commands

def cmd_rootsys(args) -> tuple[dict, bool]:
    rs = _root_system(args.type)
    return {
        "type": rs.name,
        "rank": rs.rank,
        "cartan_matrix": [list(r) for r in rs.cartan],
        "positive_roots": [{"coords": list(r), "height": h} for r, h in zip(rs.positive_roots, rs.heights)],
    }, True


def cmd_pbw(args) -> tuple[dict, bool]:
    rs = _root_system(args.type)
    try:
        factors = parse_expression(rs, args.expr)
    except ValueError as exc:
        raise UsageError("--expr", str(exc)) from None
    elem = kostant_form(rs).straighten(factors)
    terms = [{"a": list(a), "b": list(b), "c": list(c), "coeff": v} for (a, b, c), v in elem.sorted_terms()]
    return {"terms": terms, "integral": elem.is_integral()}, True


def cmd_hwmod(args) -> tuple[dict, bool]:
    rs = _root_system(args.type)
    lam = _weight(args.weight, "--weight", rs.rank)
    try:
        L = HighestWeightLattice(rs, lam, dim_cap=args.dim_cap)
    except DimensionCapExceeded as exc:
        raise UsageError("--dim-cap", str(exc)) from None
    serre = L.serre_check()
    weyl = weyl_dimension(rs, lam)
    out = {
        "dim_total": L.dim_total,
        "weyl_dimension": weyl,
        "weights": [{"mu_coords": list(mu), "ht": L.height_of(mu), "mult": L.mult(mu)} for mu in L.weights()],
        "serre_check": _verdict(serre),
    }
    return out, serre and weyl == L.dim_total


def cmd_trunc(args) -> tuple[dict, bool]:
    rs = _root_system(args.type)
    lam = _weight(args.weight, "--weight", rs.rank)
    spec = _spec(args)
    n_max = spec.r + 2
    L = HighestWeightLattice(rs, lam, max_height=spec.r + n_max * rs.heights[-1])
    T = build_truncation(L, spec)
    inv = s_invariance_check(L, spec, n_max)
    out = T.describe()
    out["s_invariance"] = _verdict(inv.passed)
    out["failing_generators"] = [g for g, ok in inv.entries if not ok]
    return out, inv.passed


def cmd_constancy(args) -> tuple[dict, bool]:
    rs = _root_system(args.type)
    lam = _weight(args.weight, "--weight", rs.rank)
    lam2 = _weight(args.weight2, "--weight2", rs.rank)
    moved = _moved(args.moved, rs.rank)
    spec = _spec(args)
    try:
        phi = phi_isomorphism(rs, lam, lam2, spec, moved, enforce=not args.force)
    except HypothesisError as exc:
        return {"error": str(exc), "hypotheses_failed": exc.failed, "verdict": "rejected"}, False
    except ArithmeticError as exc:
        return {"error": str(exc), "verdict": "rejected"}, False
    rep = local_constancy_check(phi)
    out = {
        "hypotheses": phi.hypotheses,
        "shape_match": phi.shape_match,
        "well_defined": phi.well_defined,
        "bijective": phi.bijective,
        "equivariance": [{"generator": g, "pass": ok} for g, ok in rep.entries],
        "verdict": rep.verdict,
    }
    return out, rep.verdict == "pass"


def _group(args):
    try:
        if args.generators:
            return load_generators(args.generators, args.p)
        return free_generators(args.p)
    except ValueError as exc:
        raise UsageError("--generators" if args.generators else "--p", str(exc)) from None
    except OSError as exc:
        raise UsageError("--generators", str(exc)) from None


def cmd_cohomology(args) -> tuple[dict, bool]:
    if args.k < 0:
        raise UsageError("--k", "must be non-negative")
    coeff = args.coeff
    r = None
    if coeff.startswith("trunc:"):
        try:
            r = int(coeff.split(":", 1)[1])
        except ValueError:
            raise UsageError("--coeff", f"bad truncation length in {coeff!r}") from None
        if r < 0:
            raise UsageError("--coeff", "truncation length must be non-negative")
    elif coeff not in ("qp", "zp"):
        raise UsageError("--coeff", f"expected qp, zp or trunc:r, got {coeff!r}")
    group = _group(args)
    w = ReductiveWeight(args.k, args.m)
    if r is not None:
        e1, e0 = h1_cardinality(group, args.k, r)
        out = {"g": group.rank, "coefficients": coeff, "h1_exponent": e1, "h0_exponent": e0}
        ok = True
        if group._rewriter is not None:
            setup = coset_reps(group, shuffle=args.shuffle)
            ann = annihilation_check(setup, w, r).passed
            out.update({"d": setup.d, "annihilation": _verdict(ann)})
            ok = ann
        return out, ok
    if args.generators:
        raise UsageError("--generators", "Hecke matrices need the built generators (word problem)")
    setup = coset_reps(group, shuffle=args.shuffle)
    integral = integrality_check(setup, w)
    if not integral:
        return {"g": group.rank, "d": setup.d, "integrality": "fail"}, False
    res = hecke_on_h1(setup, w, lattice_route=coeff == "zp")
    ok = True
    out = {
        "g": res.g,
        "d": res.d,
        "dim_h1": res.dim_h1,
        "dim_h0": res.dim_h0,
        "hecke_charpoly": [str(c) for c in res.charpoly],
        "integrality": "pass",
    }
    if coeff == "zp":
        ok = res.charpoly_lattice == res.charpoly
        out["lattice_route"] = _verdict(ok)
        out["hecke_matrix"] = [[str(x) for x in row] for row in res.h1_matrix]
    return out, ok


def cmd_slopes(args) -> tuple[dict, bool]:
    beta = _rational(args.beta, "--beta")
    if beta < 0:
        raise UsageError("--beta", "must be non-negative")
    try:
        rep = prop65_pipeline(args.p, args.k, args.m, beta, args.r)
    except HypothesisViolation as exc:
        return {"error": str(exc), "prop65": "rejected"}, False
    except ValueError as exc:
        raise UsageError("--p", str(exc)) from None
    out = {
        "charpoly": [str(c) for c in rep.charpoly],
        "newton": [{"slope_num": a.numerator, "slope_den": a.denominator, "mult": m} for a, m in rep.slopes.pairs],
        "infinite_slopes": rep.slopes.infinite,
        "d_beta": rep.d,
        "trunc_exponent": rep.exponent,
        "prop65": _verdict(rep.passed),
    }
    return out, rep.passed


def cmd_bound(args) -> tuple[dict, bool]:
    beta = _rational(args.beta, "--beta")
    ks = _k_range(args.k_range)
    try:
        rep = uniform_bound(args.p, beta, args.r, ks, m=args.m)
    except HypothesisViolation as exc:
        return {"error": str(exc), "verdict": "rejected"}, False
    except ValueError as exc:
        raise UsageError("--p", str(exc)) from None
    out = {
        "C": rep.C,
        "f": rep.f,
        "lambda_set_size": rep.lambda_set_size,
        "sweep": [{"k": e.k, "k_reduced": e.k_reduced, "d": e.d, "exponent": e.exponent,
                   "exponent_reduced": e.exponent_reduced, "pass": e.passed} for e in rep.sweep],
    }
    return out, rep.passed


def cmd_accept(args) -> tuple[dict, bool]:
    numbers = None
    if args.criteria:
        try:
            numbers = [int(x) for x in args.criteria.split(",")]
        except ValueError:
            raise UsageError("--criteria", "expected comma-separated criterion numbers") from None
        if any(n < 1 or n > len(acceptance.CRITERIA) for n in numbers):
            raise UsageError("--criteria", f"criteria are numbered 1..{len(acceptance.CRITERIA)}")
    results = acceptance.run_all(numbers)
    for res in results:
        print(res.line(), file=sys.stderr)
    out = {"criteria": [{"number": r.number, "title": r.title, "pass": r.passed, "details": r.details}
                        for r in results]}
    if args.timings:
        for entry, r in zip(out["criteria"], results):
            entry["seconds"] = round(r.seconds, 2)
    return out, all(r.passed for r in results)


# -------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chevtrunc", description=__doc__.splitlines()[0])
    parser.add_argument("--output", "-o", help="write the JSON document here instead of stdout")
    parser.add_argument("--verbose", "-v", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rootsys", help="positive roots and Cartan matrix")
    p.add_argument("--type", required=True)
    p.set_defaults(func=cmd_rootsys)

    p = sub.add_parser("pbw", help="straighten a product in the Kostant form")
    p.add_argument("--type", required=True)
    p.add_argument("--expr", required=True, help='tokens like "e1 f2^(2) h1"')
    p.set_defaults(func=cmd_pbw)

    p = sub.add_parser("hwmod", help="the lattice L_lambda(Z)")
    p.add_argument("--type", required=True)
    p.add_argument("--weight", required=True)
    p.add_argument("--dim-cap", type=int, default=3000)
    p.set_defaults(func=cmd_hwmod)

    def prime_r(q):
        q.add_argument("-p", "--p", type=int, required=True)
        q.add_argument("-r", "--r", type=int, required=True)

    p = sub.add_parser("trunc", help="the truncation L^[r] and its S-invariance")
    p.add_argument("--type", required=True)
    p.add_argument("--weight", required=True)
    prime_r(p)
    p.set_defaults(func=cmd_trunc)

    p = sub.add_parser("constancy", help="the isomorphism between truncations of congruent weights")
    p.add_argument("--type", required=True)
    p.add_argument("--weight", required=True)
    p.add_argument("--weight2", required=True)
    p.add_argument("--moved", required=True, help="simple roots whose coordinate changes, e.g. a1")
    prime_r(p)
    p.add_argument("--force", action="store_true", help="build the map even if hypotheses fail")
    p.set_defaults(func=cmd_constancy)

    p = sub.add_parser("cohomology", help="H^1 of Gamma_1(p) with the normalised Hecke operator")
    p.add_argument("-p", "--p", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--coeff", default="qp", help="qp, zp or trunc:r")
    p.add_argument("--generators", help="file of generator matrices 'a b c d' per line")
    p.add_argument("--shuffle", type=int, default=None, help="seed for a shuffled representative set")
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("slopes", help="slope count against the truncation bound")
    p.add_argument("-p", "--p", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--beta", required=True)
    p.add_argument("-r", "--r", type=int, required=True)
    p.set_defaults(func=cmd_slopes)

    p = sub.add_parser("bound", help="uniform bound over a range of weights")
    p.add_argument("-p", "--p", type=int, required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("-r", "--r", type=int, required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--k-range", required=True, help="lo:hi, inclusive")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("accept", help="run the acceptance grid")
    p.add_argument("--criteria", help="comma-separated subset, e.g. 1,4,7")
    p.add_argument("--timings", action="store_true", help="include wall times (output no longer reproducible)")
    p.set_defaults(func=cmd_accept)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        doc, ok = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"chevtrunc: error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(_json(doc), sort_keys=True, indent=2) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
