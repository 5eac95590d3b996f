"""Command line front end: ``garblecost table|rns|basep|modexp``."""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import report
from .errors import GarbleCostError, Infeasible


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _thresholds(text: str) -> range:
    lo, _, hi = text.partition("-")
    return range(int(lo), int(hi or lo) + 1)


def seed_from_env(default: int = 0) -> int:
    return int(os.environ.get("GARBLECOST_SEED", default))


def _write_circuit(c, path):
    with open(path, "w") as fh:
        fh.write(c.to_json())
    print(f"circuit with {len(c.gates)} gates written to {path}", file=sys.stderr)


def cmd_table(args) -> int:
    modes = ["mul", "square"] if args.mode == "both" else [args.mode]
    errors, rows = [], []
    for mode in modes:
        rows += report.reproduce_tables(_ints(args.bits), _ints(args.bases), mode,
                                        args.constructive_limit, include_rns=not args.no_rns,
                                        thresholds=_thresholds(args.thresholds), errors=errors)
    for mode in modes:
        part = [r for r in rows if r.mode == mode]
        sys.stdout.write(report.emit_report(part, args.format, args.pivot))
    for n_bits, scheme, msg in errors:
        print(f"infeasible: {n_bits} bits, {scheme}: {msg}", file=sys.stderr)
    return 2 if errors else 0


def cmd_rns(args) -> int:
    from .circuit import Circuit
    from .rns import params as rp

    if args.two_layer:
        return _two_layer(args)
    n = args.n
    if args.params_file:
        with open(args.params_file) as fh:
            params = rp.RnsParams.from_dict(json.load(fh))
    elif args.k is not None:
        params = rp.select_rns_params(args.nbits, args.k, n=n)
    else:
        params = None
    n_bits = args.nbits if args.nbits else (params.n if params else n).bit_length()
    if params is None and n is not None:
        params, _ = rp.optimize_rns(None, args.mode, n=n)
    row = report.rns_row(n_bits, args.mode, args.constructive_limit, params)
    sys.stdout.write(report.emit_report([row], args.format))
    if args.dump_circuit:
        from .rns.engine import build_bajard_imbert_mul, build_bajard_imbert_square, rns_input

        params = rp.RnsParams.from_dict(row.params)
        c = Circuit()
        x = rns_input(c, params)
        out = (build_bajard_imbert_square(c, x, params) if args.mode == "square" else
               build_bajard_imbert_mul(c, x, rns_input(c, params), params))
        c.mark_outputs(out.wires)
        _write_circuit(c, args.dump_circuit)
    return 0


def _two_layer(args) -> int:
    from .rns.two_layer import (cost_two_layer, published_cost_two_layer,
                                select_two_layer_params)

    if args.n is None:
        raise SystemExit("--two-layer needs --n")
    tp = select_two_layer_params(args.n, args.k or 2, args.K)
    row = report.ReportRow(args.n.bit_length(), "rns", args.mode, cost_two_layer(tp, args.mode),
                           None, tp.to_dict(), published_cost_two_layer(tp, args.mode))
    if cost_two_layer(tp, args.mode) < args.constructive_limit:
        row.constructive_cost = _two_layer_built(tp, args.mode, args.dump_circuit)
    sys.stdout.write(report.emit_report([row], args.format))
    return 0


def _two_layer_built(tp, mode, dump):
    from .circuit import Circuit
    from .rns.two_layer import build_two_layer_mul, build_two_layer_square, top_input

    c = Circuit()
    x = top_input(c, tp)
    out = (build_two_layer_square(c, x, tp) if mode == "square" else
           build_two_layer_mul(c, x, top_input(c, tp), tp))
    c.mark_outputs([w for r in out.residues for w in r.wires] + list(out.pair))
    if dump:
        _write_circuit(c, dump)
    return c.total_cost


def cmd_basep(args) -> int:
    from .basep.costs import digit_mul_report
    from .basep.montgomery import MontgomeryContext

    if args.params_file:
        with open(args.params_file) as fh:
            ctx = MontgomeryContext.from_dict(json.load(fh))
    elif args.nbits is None and args.n is None:
        raise SystemExit("give --nbits, --n or --params-file")
    else:
        ctx = MontgomeryContext.for_bits(args.base, args.nbits or args.n.bit_length(), args.n)
    sweep = _thresholds(args.thresholds)
    thr = sweep if args.threshold is None else [args.threshold]
    thr_c = sweep if args.const_threshold is None else [args.const_threshold]
    row = report.basep_row(args.nbits or ctx.N.bit_length(), ctx.p, args.mode,
                           args.constructive_limit, thr, ctx, thr_c)
    sys.stdout.write(report.emit_report([row], args.format))
    d = digit_mul_report(ctx.p)
    print(f"# digit product base {ctx.p}: stated 14p-10 = {d['stated']}, "
          f"itemized 14p-12 = {d['itemized']}, constructive = {d['constructive']} "
          f"(matches {d['matches']}){' [DISCREPANCY]' if d['flag'] else ''}")
    if args.dump_circuit:
        from .basep.montgomery import build_montgomery_mul_base_p
        from .basep.number import number_input
        from .circuit import Circuit

        c = Circuit()
        x = number_input(c, ctx.p, ctx.k)
        y = None if args.mode == "square" else number_input(c, ctx.p, ctx.k)
        out = build_montgomery_mul_base_p(c, x, y, ctx, row.params["threshold"],
                                          row.params["const_threshold"], args.mode == "square")
        c.mark_outputs(out.digits)
        _write_circuit(c, args.dump_circuit)
    return 0


def cmd_modexp(args) -> int:
    exponent = args.exponent
    if exponent is None and args.random_exponent:
        exponent = report.random_exponent(args.ebits, seed_from_env())
    sched = report.schedule_modexp(args.ebits, exponent)
    if args.scheme == "rns":
        sq = report.rns_row(args.nbits, "square", 0)
        mu = report.rns_row(args.nbits, "mul", 0)
    elif args.scheme.startswith("base"):
        p = int(args.scheme[4:])
        sq = report.basep_row(args.nbits, p, "square", 0)
        mu = report.basep_row(args.nbits, p, "mul", 0)
    else:
        raise SystemExit(f"unknown scheme {args.scheme!r}")
    total = sched.total(sq.formula_cost, mu.formula_cost)
    print("scheme,n_bits,e_bits,exponent,squares,multiplies,square_cost,mul_cost,total_cost")
    print(f"{args.scheme},{args.nbits},{sched.e_bits},{'' if exponent is None else exponent},"
          f"{sched.squares},{sched.multiplies},{sq.formula_cost},{mu.formula_cost},{total}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="garblecost",
                                 description="Ciphertext costs of garbled modular multiplication.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, modes=("mul", "square")):
        p.add_argument("--mode", choices=modes, default="mul")
        p.add_argument("--format", choices=("csv", "markdown"), default="csv")
        p.add_argument("--constructive-limit", type=float, default=report.CONSTRUCTIVE_LIMIT,
                       help="build circuits only when the formula cost is below this")

    t = sub.add_parser("table", help="RNS and base-p costs over bit lengths")
    common(t, ("mul", "square", "both"))
    t.add_argument("--bits", default=",".join(map(str, report.DEFAULT_BITS)))
    t.add_argument("--bases", default=",".join(map(str, report.DEFAULT_BASES)))
    t.add_argument("--pivot", action="store_true", help="schemes as columns")
    t.add_argument("--no-rns", action="store_true")
    t.add_argument("--thresholds", default="1-16", help="Karatsuba threshold sweep, e.g. 1-16")
    t.set_defaults(func=cmd_table)

    r = sub.add_parser("rns", help="double-RNS Montgomery cost")
    common(r)
    r.add_argument("--nbits", type=int)
    r.add_argument("--n", type=int, help="explicit odd modulus")
    r.add_argument("--k", type=int, help="fix the basis size instead of optimizing")
    r.add_argument("--K", type=int, default=2, help="top basis size for --two-layer")
    r.add_argument("--two-layer", action="store_true")
    r.add_argument("--params-file")
    r.add_argument("--dump-circuit")
    r.set_defaults(func=cmd_rns)

    b = sub.add_parser("basep", help="base-p Montgomery cost")
    common(b)
    b.add_argument("--base", type=int, default=5)
    b.add_argument("--nbits", type=int)
    b.add_argument("--n", type=int, help="explicit modulus coprime to the base")
    b.add_argument("--threshold", type=int, help="Karatsuba threshold for the product")
    b.add_argument("--const-threshold", type=int, help="threshold for the constant products")
    b.add_argument("--thresholds", default="1-16", help="sweep used for unset thresholds")
    b.add_argument("--params-file")
    b.add_argument("--dump-circuit")
    b.set_defaults(func=cmd_basep)

    m = sub.add_parser("modexp", help="square-and-multiply exponentiation cost")
    m.add_argument("--nbits", type=int, required=True)
    m.add_argument("--ebits", type=int, required=True)
    m.add_argument("--exponent", type=int)
    m.add_argument("--random-exponent", action="store_true",
                   help="draw an exponent seeded by GARBLECOST_SEED")
    m.add_argument("--scheme", default="rns", help="rns or base<p>, e.g. base5")
    m.set_defaults(func=cmd_modexp)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    except GarbleCostError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
