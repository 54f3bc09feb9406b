"""Command-line interface.

Subcommands: verify-identities, stabilize, theta, adjoint-l, slopes,
amice-check.  All numbers in reports are exact strings (rationals "a/b",
truncated p-adics "p^v * u mod p^M").

Exit codes: 0 all-pass, 1 verification failure, 2 input error,
3 precision/budget exhaustion.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import sys
from fractions import Fraction

from .adjoint import (assemble_adjoint_value, d_infinity, iwahori_index,
                      noncritical_slope, partial_adjoint_l)
from .amice import basis_scaling_valuation
from .dist import PrecisionRefusal, up_slope_data
from .padic import format_rational, val_frac
from .records import EigenformRecord, RecordError, RunConfig, parse_eigenform
from .reports import run_all
from .stabpair import theta_closed_form
from .symalg import AlgebraContext


def _emit(args, payload: dict, text_lines: list[str]):
    if args.json:
        out = json.dumps(payload, indent=2, sort_keys=True)
    else:
        out = "\n".join(text_lines)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)


def _config_from(args) -> RunConfig:
    kw = {}
    if args.trunc:
        kw["truncation"] = args.trunc
    if args.prec:
        kw["precision"] = args.prec
    if args.euler_bound:
        kw["euler_bound"] = args.euler_bound
    return RunConfig(**kw)


def _load_record(args) -> EigenformRecord:
    if args.input:
        return parse_eigenform(args.input)
    if args.p is None or args.k is None:
        raise RecordError("input", "need --input FILE or both --p and --k with eigenvalues")
    return parse_eigenform({
        "disc_K": args.disc, "level_label": "1", "weight": args.k, "p": args.p,
        "lambda_p": args.lambda_p or "0", "lambda_pbar": args.lambda_pbar or "0",
        "euler_data": [],
    })


def cmd_verify_identities(args) -> int:
    config = _config_from(args)
    report = run_all(config, inject_sign_flip=args.inject_sign_flip)
    payload = json.loads(report.render_json())
    _emit(args, payload, [report.render_text()])
    return report.exit_code


def _root_valuations(lam: Fraction, p: int, k: int) -> list[Fraction]:
    """Valuations of the two Hecke roots, from the Newton polygon of
    X^2 - lam X + p^(k+1) (no root extraction)."""
    total = Fraction(k + 1)
    if lam == 0:
        return [total / 2, total / 2]
    vl = Fraction(val_frac(lam, p))
    if vl < total / 2:
        return sorted([vl, total - vl])
    return [total / 2, total / 2]


def cmd_stabilize(args) -> int:
    rec = _load_record(args)
    vals_p = _root_valuations(rec.lambda_p, rec.p, rec.weight)
    vals_pb = _root_valuations(rec.lambda_pbar, rec.p, rec.weight)
    entries = []
    for i, vi in enumerate(vals_p):
        for j, vj in enumerate(vals_pb):
            nc = noncritical_slope(vi, vj, rec.weight)
            entries.append({
                "branch": [i, j],
                "up_eigenvalue_valuation": format_rational(vi + vj),
                "root_valuations": [format_rational(vi), format_rational(vj)],
                "noncritical": nc["noncritical"],
                "ordinary": nc["ordinary"],
            })
    payload = {
        "p": rec.p, "weight": rec.weight,
        "hecke_poly_p": {"trace": format_rational(rec.lambda_p),
                         "norm": format_rational(rec.rootdata_p.norm),
                         "disc": format_rational(rec.rootdata_p.discriminant)},
        "hecke_poly_pbar": {"trace": format_rational(rec.lambda_pbar),
                            "norm": format_rational(rec.rootdata_pbar.norm),
                            "disc": format_rational(rec.rootdata_pbar.discriminant)},
        "ramanujan_flags": list(rec.ramanujan_flags),
        "stabilisations": entries,
    }
    lines = [f"p={rec.p} k={rec.weight}"]
    for e in entries:
        lines.append(f"branch {tuple(e['branch'])}: v(U_p-eigenvalue) = "
                     f"{e['up_eigenvalue_valuation']}, noncritical={e['noncritical']},"
                     f" ordinary={e['ordinary']}")
    _emit(args, payload, lines)
    return 0


def _theta_numeric(rec: EigenformRecord, i: int, j: int):
    """Numeric Theta via the factored local form; complex roots allowed."""
    p, k = rec.p, rec.weight
    sgn = (-1) ** k
    D = sgn * p + 1

    def E(lam: Fraction, branch: int) -> complex:
        disc = lam * lam - 4 * Fraction(p) ** (k + 1)
        sq = cmath.sqrt(complex(disc))
        a = (complex(lam) + sq) / 2 if branch == 0 else (complex(lam) - sq) / 2
        b = complex(lam) - a
        return (b - a) * (b - sgn * p * a) / (p * a)

    return E(rec.lambda_p, i) * E(rec.lambda_pbar, j) / D ** 2


def cmd_theta(args) -> int:
    rec = _load_record(args)
    if not rec.eigenvalues_nonzero:
        print("refused: the pairing computation requires both eigenvalues at p "
              "to be nonzero (the cancellation in the mixed pairings divides by them)",
              file=sys.stderr)
        return 2
    ctx = AlgebraContext(rec.p, rec.weight)
    entries = []
    for i in (0, 1):
        for j in (0, 1):
            th = theta_closed_form(ctx, i, j, "derived")
            num = _theta_numeric(rec, i, j)
            entries.append({
                "branch": [i, j],
                "symbolic_coordinates": [str(c) for c in th.value.c],
                "numeric": {"re": num.real, "im": num.imag},
            })
    payload = {"p": rec.p, "weight": rec.weight,
               "lambda_p": format_rational(rec.lambda_p),
               "lambda_pbar": format_rational(rec.lambda_pbar),
               "theta": entries}
    lines = [f"p={rec.p} k={rec.weight}"]
    for e in entries:
        lines.append(f"branch {tuple(e['branch'])}: theta = {e['numeric']['re']:.12g}"
                     f" + {e['numeric']['im']:.12g} i")
    _emit(args, payload, lines)
    return 0


def cmd_adjoint_l(args) -> int:
    rec = _load_record(args)
    if not rec.eigenvalues_nonzero:
        print("refused: eigenvalues at p must be nonzero", file=sys.stderr)
        return 2
    config = _config_from(args)
    s = args.s
    pl = partial_adjoint_l(rec.euler_table, s, config.euler_bound, rec.disc_K)
    dinf = d_infinity(rec.weight)
    entries = []
    for i in (0, 1):
        for j in (0, 1):
            th = _theta_numeric(rec, i, j)
            pref = ((rec.p + 1) ** 2 * float(dinf) * rec.disc_K / (16 * math.pi))
            val = pref * th * pl.value
            entries.append({"branch": [i, j],
                            "pairing_value": {"re": val.real, "im": val.imag}})
    payload = {
        "p": rec.p, "weight": rec.weight, "disc_K": rec.disc_K,
        "s": s,
        "partial_l": pl.value,
        "tail_log_bound": pl.tail_log_bound,
        "euler_factors_used": pl.used,
        "missing_ideals_below_bound": pl.missing_ideals,
        "index_prefactor": iwahori_index(rec.p),
        "arch_factor": {"rational": format_rational(dinf.rational),
                        "pi_exponent": dinf.pi_exponent},
        "pairing_values": entries,
    }
    lines = [f"partial L(ad0, {s}) over q <= {config.euler_bound}: {pl.value:.12g}"
             f" (tail log bound {pl.tail_log_bound})"]
    if pl.missing_ideals:
        lines.append(f"missing ideals below bound: {', '.join(pl.missing_ideals)}")
    for e in entries:
        lines.append(f"branch {tuple(e['branch'])}: assembled pairing value = "
                     f"{e['pairing_value']['re']:.9g} + {e['pairing_value']['im']:.9g} i")
    _emit(args, payload, lines)
    return 0


def cmd_slopes(args) -> int:
    rec = _load_record(args)
    config = _config_from(args)
    try:
        data = up_slope_data(rec.weight, rec.p, config.truncation,
                             margin=config.slope_margin)
    except PrecisionRefusal as e:
        print(f"precision exhausted: {e}", file=sys.stderr)
        return 3
    npg = data["polygon"]
    payload = {
        "p": rec.p, "weight": rec.weight, "truncation": config.truncation,
        "slopes": [format_rational(s) for s in npg.slopes],
        "certified_below": format_rational(data["horizon"]),
        "margin_certified_below": format_rational(data["margin_certified_below"]),
        "vertices": [[m, format_rational(v)] for m, v in npg.vertices],
    }
    lines = [f"truncated U_p slopes at p={rec.p}, k={rec.weight}, N={config.truncation}:",
             " ".join(format_rational(s) for s in npg.slopes),
             f"certified below {data['horizon']} "
             f"(margin-certified below {data['margin_certified_below']})"]
    _emit(args, payload, lines)
    return 0


def cmd_amice_check(args) -> int:
    config = _config_from(args)
    rows = []
    ok = True
    for p in config.verify_primes:
        for (r, r2) in ((1, 2), (1, 3), (2, 3)):
            worst = 0
            try:
                for i in range(args.max_index + 1):
                    v = basis_scaling_valuation((i,), r, r2, p)
                    worst = max(worst, v)
            except ArithmeticError as e:
                ok = False
                rows.append({"p": p, "r": r, "r2": r2, "status": "fail", "detail": str(e)})
                continue
            rows.append({"p": p, "r": r, "r2": r2, "status": "pass",
                         "max_valuation": worst})
    payload = {"checks": rows, "all_pass": ok}
    lines = [f"p={row['p']} (r,r')=({row['r']},{row['r2']}): {row['status']}"
             + (f", max scaling valuation {row.get('max_valuation')}" if row["status"] == "pass" else "")
             for row in rows]
    _emit(args, payload, lines)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="bianchi-adjoint",
        description="Exact verification toolkit for the p-adic adjoint pairing "
                    "of Bianchi cuspforms")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--p", type=int, help="odd split prime")
        sp.add_argument("--k", type=int, help="parallel weight")
        sp.add_argument("--disc", type=int, default=-4, help="field discriminant (default -4)")
        sp.add_argument("--lambda-p", dest="lambda_p", help="eigenvalue at the first prime above p")
        sp.add_argument("--lambda-pbar", dest="lambda_pbar", help="eigenvalue at the second prime above p")
        sp.add_argument("--trunc", type=int, help="truncation N per variable")
        sp.add_argument("--prec", type=int, help="p-adic precision M")
        sp.add_argument("--euler-bound", type=int, help="Euler product bound B")
        sp.add_argument("--input", help="eigenform JSON file")
        sp.add_argument("--out", help="write the report to this path")
        sp.add_argument("--json", action="store_true", help="JSON output")

    sp = sub.add_parser("verify-identities", help="run every identity suite")
    common(sp)
    sp.add_argument("--inject-sign-flip", action="store_true",
                    help="test mode: corrupt a sign and confirm detection")
    sp.set_defaults(func=cmd_verify_identities)

    sp = sub.add_parser("stabilize", help="the four stabilisation branches")
    common(sp)
    sp.set_defaults(func=cmd_stabilize)

    sp = sub.add_parser("theta", help="the local pairing factor per branch")
    common(sp)
    sp.set_defaults(func=cmd_theta)

    sp = sub.add_parser("adjoint-l", help="partial adjoint L-value and assembly")
    common(sp)
    sp.add_argument("--s", type=float, default=1.0, help="evaluation point (default 1)")
    sp.set_defaults(func=cmd_adjoint_l)

    sp = sub.add_parser("slopes", help="certified slope multiset of truncated U_p")
    common(sp)
    sp.set_defaults(func=cmd_slopes)

    sp = sub.add_parser("amice-check", help="two-route valuation agreement")
    common(sp)
    sp.add_argument("--max-index", type=int, default=64)
    sp.set_defaults(func=cmd_amice_check)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except RecordError as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2
    except PrecisionRefusal as e:
        print(f"precision/budget exhausted: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
