"""Digit-level gadgets: column adders, digit products, negation, abs.

Multi-operand additions go through ``Columns``.  Each column's private
terms are cast into a ring Z_S just big enough for the column's maximum
sum, the low digit is read off for free in Z_p, and every carry digit
costs one projection out of Z_S.  Carries bounded by b with 2b < p-1
are kept in Z_{b+1}: casting from there later costs b instead of p-1,
and the Z_p copy needed for the free low digit costs another b.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..circuit import Circuit
from ..errors import BaseMismatch, NotPrime, TooManyOperands
from ..modular import is_prime, prime_table
from ..tables import digit_of, scaled_residue
from .number import BasePNumber


@dataclass(frozen=True)
class Term:
    """A private summand: zp is its Z_p wire, src the cheapest wire to cast from."""

    zp: int
    src: int
    bound: int
    weight: int = 1


def small_carry(p: int, b: int) -> bool:
    return 2 * b < p - 1


class Columns:
    """Accumulates weighted digit terms per column, then resolves carries."""

    def __init__(self, c: Circuit, p: int, width: int):
        self.c, self.p, self.width = c, p, width
        self.terms = [[] for _ in range(width)]
        self.cval = [0] * width
        self.cbound = [0] * width

    def const(self, j: int, value: int, bound: int | None = None) -> None:
        if j < self.width:
            self.cval[j] += value
            self.cbound[j] += value if bound is None else bound

    def digit(self, j: int, w: int, bound: int | None = None, weight: int = 1) -> None:
        """Add a Z_p wire; a public wire becomes a constant with the same bound."""
        bound = self.p - 1 if bound is None else bound
        if self.c.is_public(w):
            self.const(j, self.c.value(w) * weight, bound * weight)
        elif j < self.width:
            self.terms[j].append(Term(w, w, bound, weight))

    def bit(self, j: int, w2: int, wp: int, weight: int = 1) -> None:
        """Add a 0/1 value known both as a Z_2 wire and a Z_p wire."""
        if self.c.is_public(w2):
            self.const(j, self.c.value(w2) * weight, weight)
        elif j < self.width:
            self.terms[j].append(Term(wp, w2, 1, weight))

    def digits(self, offset: int, wires, bound: int | None = None, weight: int = 1) -> None:
        for i, w in enumerate(wires):
            self.digit(offset + i, w, bound, weight)

    def resolve(self, out_len: int | None = None, want_final: bool = False):
        """Digits of the total mod p^out_len, plus the Z_2 carry out if requested."""
        c, p = self.c, self.p
        out_len = self.width if out_len is None else out_len
        span = range(out_len + 1)
        terms = [list(self.terms[j]) if j < self.width else [] for j in span]
        cval = [self.cval[j] if j < self.width else 0 for j in span]
        cbound = [self.cbound[j] if j < self.width else 0 for j in span]
        digits, finals = [], []
        for j in range(out_len):
            col, v, cb = terms[j], cval[j], cbound[j]
            if not col:
                digits.append(c.const(v % p, p))
                if v // p or cb // p:
                    if j + 1 < out_len:
                        cval[j + 1] += v // p
                        cbound[j + 1] += cb // p
                    elif want_final:
                        finals.append(c.const(v // p, 2))
                continue
            if len(col) == 1 and col[0].weight == 1 and cb == 0:
                digits.append(col[0].zp)
                continue
            mx = sum(t.bound * t.weight for t in col) + cb
            low = [c.scale(t.zp, t.weight) for t in col] + [c.const(v, p)]
            digits.append(c.add(low))
            if mx < p:
                continue
            carries, e = [], 1
            while p ** e <= mx:
                if j + e < out_len or (want_final and j + e == out_len):
                    carries.append(e)
                e += 1
            if not carries:
                continue
            S = mx + 1
            casts = [c.project(t.src, S, scaled_residue(c.modulus(t.src), t.weight, S)) for t in col]
            total = c.add(casts + [c.const(v, S)])
            for e in carries:
                b = min(p - 1, mx // p ** e)
                if j + e == out_len:
                    if b > 1:
                        raise ValueError("carry out of the top column exceeds one bit")
                    finals.append(c.project(total, 2, digit_of(S, p, e, 2)))
                elif small_carry(p, b):
                    narrow = c.project(total, b + 1, digit_of(S, p, e, b + 1))
                    wide = c.project(narrow, p, scaled_residue(b + 1, 1, p))
                    terms[j + e].append(Term(wide, narrow, b))
                else:
                    w = c.project(total, p, digit_of(S, p, e, p))
                    terms[j + e].append(Term(w, w, b))
        final = None
        if want_final:
            if len(finals) > 1:
                raise ValueError("several carries leave the top column")
            final = finals[0] if finals else c.const(0, 2)
        return digits, final


def _check_prime(p):
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")


# -- adders -----------------------------------------------------------------

def build_adder(c: Circuit, inputs, p: int):
    """(low, carry) of a sum of single digits, via a cast into Z_{mp}."""
    m = len(inputs)
    if m < 2:
        raise ValueError("adder needs at least two inputs")
    if m > p + 1:
        raise TooManyOperands(f"{m} digits may overflow a single carry digit in base {p}")
    for w in inputs:
        if c.modulus(w) != p:
            raise BaseMismatch(f"adder input mod {c.modulus(w)} in base {p}")
    ring = m * p
    low = c.add(list(inputs))
    total = c.add([c.project(w, ring, scaled_residue(p, 1, ring)) for w in inputs])
    carry = c.project(total, p, digit_of(ring, p, 1, p))
    return low, carry


def build_ripple_add(c: Circuit, x: BasePNumber, y: BasePNumber) -> BasePNumber:
    """Sum of two non-negative d-digit numbers as d+1 digits."""
    if x.p != y.p:
        raise BaseMismatch("operands in different bases")
    if len(x) != len(y):
        raise ValueError("operands must have the same digit count")
    for v in (x, y):
        if not c.is_public(v.sign) or c.value(v.sign) or v.offset:
            raise ValueError("ripple add takes non-negative, normalized operands")
    p = x.p
    digits, carry = [], None
    for a, b in zip(x.digits, y.digits):
        low, carry = build_adder(c, [a, b] if carry is None else [a, b, carry], p)
        digits.append(low)
    digits.append(carry)
    return BasePNumber(p, tuple(digits), c.const(0, 2))


# -- single-digit products --------------------------------------------------

@lru_cache(maxsize=None)
def _mul_tables(p: int):
    """Lookup tables for the discrete-log digit multiplier.

    With A = g^a mod p, alpha = floor((g^a mod p^2) / p) satisfies
    g^a = A + p alpha (mod p^2), so
    A B = g^(a+b) - p (alpha B + beta A) (mod p^2)
    and the high digit of A B is F(a+b) - alpha B - beta A mod p with
    F(c) = floor((g^c mod p^2) / p).  Zero maps to a sentinel exponent
    that lands a+b in a region where F is 0.
    """
    tab = prime_table(p)
    g, p2 = tab.g, p * p
    ring = 4 * p - 1
    zero = 2 * p - 1
    log = np.array([zero] + [int(tab.dlog[x]) for x in range(1, p)], dtype=np.int64)
    alpha = np.array([0] + [pow(g, int(tab.dlog[x]), p2) // p for x in range(1, p)], dtype=np.int64)
    F = np.array([pow(g, s, p2) // p if s <= 2 * p - 4 else 0 for s in range(ring)], dtype=np.int64)
    for a in (log, alpha, F):
        a.setflags(write=False)
    return ring, log, alpha, F


@lru_cache(maxsize=None)
def _const_tables(p: int, b: int):
    """Tables for multiplying by the public digit b (2 <= b < p)."""
    tab = prime_table(p)
    g, p2 = tab.g, p * p
    ring = 3 * p - 2
    zero = 2 * p - 2
    lb = int(tab.dlog[b])
    log = np.array([zero] + [int(tab.dlog[x]) for x in range(1, p)], dtype=np.int64)
    alpha = np.array([0] + [pow(g, int(tab.dlog[x]), p2) // p for x in range(1, p)], dtype=np.int64)
    F = np.array([pow(g, s, p2) // p if s <= 2 * p - 4 else 0 for s in range(ring)], dtype=np.int64)
    beta = pow(g, lb, p2) // p
    for a in (log, alpha, F):
        a.setflags(write=False)
    return ring, lb, beta, log, alpha, F


def build_single_digit_mul(c: Circuit, a: int, b: int):
    """(low, carry) of a * b for digits mod p: 14p - 12 ciphertexts (2 for p = 2)."""
    p = c.modulus(a)
    if c.modulus(b) != p:
        raise BaseMismatch("digits in different bases")
    _check_prime(p)
    if c.is_public(b):
        return build_single_digit_mul_const(c, a, c.value(b))
    if c.is_public(a):
        return build_single_digit_mul_const(c, b, c.value(a))
    low = c.private_mul(a, b)
    if p == 2:
        return low, c.const(0, 2)
    ring, log, alpha, F = _mul_tables(p)
    la = c.project(a, ring, log)
    lb = c.project(b, ring, log)
    al = c.project(a, p, alpha)
    be = c.project(b, p, alpha)
    f = c.project(c.add(la, lb), p, F)
    carry = c.add(f, c.scale(c.private_mul(al, b), p - 1), c.scale(c.private_mul(be, a), p - 1))
    return low, carry


def build_single_digit_mul_const(c: Circuit, a: int, b: int):
    """(low, carry) of a * b for a private digit a and a public b: 5p - 5 ciphertexts."""
    p = c.modulus(a)
    _check_prime(p)
    b %= p
    zero = c.const(0, p)
    if c.is_public(a):
        hi, lo = divmod(c.value(a) * b, p)
        return c.const(lo, p), c.const(hi, p)
    if b == 0:
        return zero, zero
    if b == 1:
        return a, zero
    ring, lb, beta, log, alpha, F = _const_tables(p, b)
    low = c.scale(a, b)
    s = c.add(c.project(a, ring, log), c.const(lb, ring))
    f = c.project(s, p, F)
    al = c.project(a, p, alpha)
    carry = c.add(f, c.scale(al, -b), c.scale(a, -beta))
    return low, carry


@lru_cache(maxsize=None)
def _square_high(p: int):
    t = np.arange(p, dtype=np.int64) ** 2 // p
    t.setflags(write=False)
    return t


def build_digit_square(c: Circuit, a: int):
    """(low, carry) of a^2: 2p - 2 ciphertexts."""
    p = c.modulus(a)
    if p == 2:
        return a, c.const(0, 2)
    return c.square(a), c.project(a, p, _square_high(p))


# -- sign handling ----------------------------------------------------------

def flip_digit(c: Circuit, d: int) -> int:
    """d -> p - 1 - d, free."""
    p = c.modulus(d)
    return c.add(c.scale(d, p - 1), c.const(p - 1, p))


def negate(c: Circuit, x: BasePNumber) -> BasePNumber:
    """-x for free: flip digits and sign, defer the +1 into ``offset``."""
    digits = tuple(flip_digit(c, d) for d in x.digits)
    sign = c.add(x.sign, c.const(1, 2))
    return BasePNumber(x.p, digits, sign, 1 - x.offset, x.bound)


def bit_to_digit(c: Circuit, s: int, p: int) -> int:
    """Copy of a Z_2 wire in Z_p (1 ciphertext, free for p = 2)."""
    if p == 2:
        return s
    return c.project(s, p, scaled_residue(2, 1, p))


def difference(c: Circuit, p: int, a, b, width: int, b_const: bool = False):
    """a - b over ``width`` digits as (digits, sign bit).

    a is a list of digit wires; b is a list of wires, or of plain digits
    when ``b_const``.  Computed as a + flip(b) + 1, whose carry out of the
    top column is 1 exactly when a >= b.
    """
    cols = Columns(c, p, width)
    for i in range(width):
        if i < len(a):
            cols.digit(i, a[i])
        if i >= len(b):
            cols.const(i, p - 1)
        elif b_const:
            cols.const(i, p - 1 - int(b[i]), p - 1)
        else:
            cols.digit(i, flip_digit(c, b[i]))
    cols.const(0, 1)
    digits, carry = cols.resolve(width, want_final=True)
    return digits, c.add(carry, c.const(1, 2))


def conditional_flip(c: Circuit, digits, s: int, sp: int):
    """Flip every digit when the bit s is 1.  Cost 2(p-1) per digit for odd p."""
    p = c.modulus(digits[0]) if digits else 2
    if p == 2:
        return [c.add(d, s) for d in digits]
    out = []
    for d in digits:
        delta = c.add(c.scale(d, p - 2), c.const(p - 1, p))
        out.append(c.add(d, c.mul(sp, delta)))
    return out


def normalize(c: Circuit, x: BasePNumber) -> BasePNumber:
    """Absorb a pending +1 into the digits."""
    if not x.offset:
        return x
    p, m = x.p, len(x.digits)
    cols = Columns(c, p, m)
    cols.digits(0, x.digits)
    cols.const(0, x.offset)
    digits, carry = cols.resolve(m, want_final=True)
    return BasePNumber(p, tuple(digits), c.add(x.sign, carry), 0, x.bound)


def build_abs(c: Circuit, x: BasePNumber) -> BasePNumber:
    """|x| with the same digit count: conditional flip, then add the sign bit."""
    x = normalize(c, x)
    p, m = x.p, len(x.digits)
    s = x.sign
    if c.is_public(s):
        if not c.value(s):
            return x
    sp = bit_to_digit(c, s, p)
    flipped = conditional_flip(c, list(x.digits), s, sp)
    cols = Columns(c, p, m)
    cols.digits(0, flipped)
    cols.bit(0, s, sp)
    digits, _ = cols.resolve(m)
    return BasePNumber(p, tuple(digits), c.const(0, 2), 0, x.bound)
