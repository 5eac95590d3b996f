"""Cost tables, exponentiation schedules and report formatting."""
from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass, field

from .basep.costs import optimize_montgomery, published_montgomery
from .basep.montgomery import MontgomeryContext
from .circuit import Circuit
from .errors import Infeasible
from .rns.costs import reduction_cost_formula
from .rns.params import optimize_rns

DEFAULT_BITS = (139, 350, 585, 835, 1364, 1924, 2504)
DEFAULT_BASES = (2, 3, 5, 7, 11)
CONSTRUCTIVE_LIMIT = 10 ** 7
COLUMNS = ("n_bits", "scheme", "mode", "formula_cost", "constructive_cost", "params",
           "published_formula_cost")


@dataclass
class ReportRow:
    n_bits: int
    scheme: str
    mode: str
    formula_cost: int
    constructive_cost: int | None = None
    params: dict = field(default_factory=dict)
    published_formula_cost: int | float | None = None

    def __post_init__(self):
        if self.mode not in ("mul", "square"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.scheme != "rns" and not self.scheme.startswith("base"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.formula_cost <= 0:
            raise ValueError("formula_cost must be positive")

    def as_list(self) -> list:
        return [self.n_bits, self.scheme, self.mode, self.formula_cost,
                "" if self.constructive_cost is None else self.constructive_cost,
                json.dumps(self.params, sort_keys=True),
                "" if self.published_formula_cost is None else self.published_formula_cost]


@dataclass
class ExpSchedule:
    e_bits: int
    squares: int
    multiplies: int
    exponent: int | None = None

    def total(self, square_cost: int, mul_cost: int) -> int:
        return self.squares * square_cost + self.multiplies * mul_cost


# -- single cells -----------------------------------------------------------

def rns_constructive(params, mode: str) -> int:
    from .rns.engine import build_bajard_imbert_mul, build_bajard_imbert_square, rns_input

    c = Circuit()
    x = rns_input(c, params)
    if mode == "square":
        build_bajard_imbert_square(c, x, params)
    else:
        build_bajard_imbert_mul(c, x, rns_input(c, params), params)
    return c.total_cost


def basep_constructive(ctx: MontgomeryContext, mode: str, threshold: int,
                       const_threshold: int) -> int:
    from .basep.montgomery import build_montgomery_mul_base_p
    from .basep.number import number_input

    c = Circuit()
    x = number_input(c, ctx.p, ctx.k)
    y = None if mode == "square" else number_input(c, ctx.p, ctx.k)
    build_montgomery_mul_base_p(c, x, y, ctx, threshold, const_threshold,
                                square=mode == "square")
    return c.total_cost


def rns_row(n_bits: int, mode: str, constructive_limit: int = CONSTRUCTIVE_LIMIT,
            params=None) -> ReportRow:
    """Best single-layer parameters for the size (or the given ones)."""
    from .rns.costs import cost_bajard_imbert

    if params is None:
        params, cost = optimize_rns(n_bits, mode)
    else:
        cost = cost_bajard_imbert(params, mode)
    built = rns_constructive(params, mode) if cost < constructive_limit else None
    sigma = sum(q - 1 for q in params.moduli)
    published = (2 if mode == "mul" else 1) * sigma + reduction_cost_formula(params)
    return ReportRow(n_bits, "rns", mode, cost, built, params.to_dict(), published)


def basep_row(n_bits: int, p: int, mode: str, constructive_limit: int = CONSTRUCTIVE_LIMIT,
              thresholds=range(1, 17), ctx: MontgomeryContext | None = None,
              const_thresholds=None) -> ReportRow:
    """Best thresholds for base p; the modulus defaults to the largest odd n_bits-bit one."""
    ctx = ctx or MontgomeryContext.for_bits(p, n_bits)
    cost, thr, thr_c = optimize_montgomery(ctx, mode == "square", thresholds, const_thresholds)
    built = basep_constructive(ctx, mode, thr, thr_c) if cost < constructive_limit else None
    params = dict(ctx.to_dict(), threshold=thr, const_threshold=thr_c)
    return ReportRow(n_bits, f"base{p}", mode, cost, built, params,
                     published_montgomery(p, ctx.k, mode == "square"))


def reproduce_tables(bit_lengths=DEFAULT_BITS, bases=DEFAULT_BASES, mode: str = "mul",
                     constructive_limit: int = CONSTRUCTIVE_LIMIT, include_rns: bool = True,
                     thresholds=range(1, 17), errors: list | None = None) -> list[ReportRow]:
    """One row per (bit length, scheme), RNS first, in input order.

    Infeasible cells are skipped and appended to ``errors`` when given,
    otherwise re-raised.
    """
    rows = []
    for n_bits in bit_lengths:
        cells = [("rns", None)] if include_rns else []
        cells += [(f"base{p}", p) for p in bases]
        for scheme, p in cells:
            try:
                if p is None:
                    rows.append(rns_row(n_bits, mode, constructive_limit))
                else:
                    rows.append(basep_row(n_bits, p, mode, constructive_limit, thresholds))
            except Infeasible as exc:
                if errors is None:
                    raise
                errors.append((n_bits, scheme, str(exc)))
    return rows


# -- exponentiation ---------------------------------------------------------

def schedule_modexp(e_bits: int, exponent: int | None = None) -> ExpSchedule:
    """Left-to-right square-and-multiply counts.

    A concrete exponent gives bitlen - 1 squares and popcount - 1
    multiplies; otherwise e_bits - 1 squares and e_bits // 2 multiplies
    (the expected count for a random exponent, rounded down).
    """
    if exponent is not None:
        if exponent < 1:
            raise ValueError("exponent must be positive")
        n = exponent.bit_length()
        return ExpSchedule(n, n - 1, bin(exponent).count("1") - 1, exponent)
    if e_bits < 1:
        raise ValueError("e_bits must be >= 1")
    return ExpSchedule(e_bits, e_bits - 1, e_bits // 2)


def random_exponent(e_bits: int, seed: int | None = None) -> int:
    """An e_bits-bit exponent with its top bit set."""
    rng = random.Random(seed)
    return (1 << (e_bits - 1)) | rng.getrandbits(e_bits - 1) if e_bits > 1 else 1


# -- output -----------------------------------------------------------------

def _sci(x) -> str:
    return f"{float(x):.3g}"


def emit_report(rows, fmt: str = "csv", pivot: bool = False) -> str:
    """CSV or Markdown text; ``pivot`` puts schemes in columns and bit lengths in rows."""
    rows = list(rows)
    if fmt not in ("csv", "markdown"):
        raise ValueError(f"unknown format {fmt!r}")
    if pivot:
        header, body = _pivot(rows)
    else:
        header, body = list(COLUMNS), [r.as_list() for r in rows]
    if fmt == "csv":
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(body)
        return out.getvalue()
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(str(v) for v in r) + " |" for r in body]
    return "\n".join(lines) + "\n"


def _pivot(rows):
    schemes, bits, cell = [], [], {}
    for r in rows:
        if r.scheme not in schemes:
            schemes.append(r.scheme)
        if r.n_bits not in bits:
            bits.append(r.n_bits)
        cell[(r.n_bits, r.scheme)] = r.formula_cost
    modes = sorted({r.mode for r in rows})
    label = "n_bits" if len(modes) != 1 else f"n_bits ({modes[0]})"
    header = [label] + schemes
    body = [[b] + [_sci(cell[(b, s)]) if (b, s) in cell else "" for s in schemes] for b in bits]
    return header, body
