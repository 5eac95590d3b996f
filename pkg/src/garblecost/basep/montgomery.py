"""Classical Montgomery multiplication mod N with M = p^k, in base p."""
from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd

from ..circuit import Circuit
from ..errors import ContextViolation
from ..modular import mod_inverse
from .arith import Columns, bit_to_digit, build_ripple_add, difference
from .karatsuba import (DEFAULT_THRESHOLD, build_karatsuba_mul, build_karatsuba_mul_const,
                        build_karatsuba_square)
from .number import BasePNumber, encode_base_p


def digits_for_bits(p: int, n_bits: int) -> int:
    """Smallest k with p^k >= 2^n_bits."""
    k, power, target = 1, p, 1 << n_bits
    while power < target:
        power *= p
        k += 1
    return k


def default_modulus(p: int, n_bits: int) -> int:
    """Largest n_bits-bit odd N coprime to p."""
    n = (1 << n_bits) - 1
    while gcd(n, 2 * p) != 1:
        n -= 2 if n % 2 else 1
    return n


@dataclass(frozen=True)
class MontgomeryContext:
    p: int
    k: int
    N: int

    def __post_init__(self):
        if gcd(self.N, self.p) != 1:
            raise ContextViolation(f"N={self.N} shares a factor with p={self.p}")
        if not 1 <= self.N < self.p ** self.k:
            raise ContextViolation(f"N={self.N} does not fit {self.k} base-{self.p} digits")

    @property
    def M(self) -> int:
        return self.p ** self.k

    @property
    def q(self) -> int:
        """N^{-1} mod p^k."""
        return mod_inverse(self.N, self.M)

    @property
    def q_neg(self) -> int:
        return (-self.q) % self.M

    @classmethod
    def for_bits(cls, p: int, n_bits: int, N: int | None = None) -> "MontgomeryContext":
        return cls(p, digits_for_bits(p, n_bits), default_modulus(p, n_bits) if N is None else N)

    def to_dict(self) -> dict:
        return {"p": self.p, "k": self.k, "N": self.N, "q": self.q}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "MontgomeryContext":
        ctx = cls(int(d["p"]), int(d["k"]), int(d["N"]))
        if "q" in d and int(d["q"]) != ctx.q:
            raise ContextViolation("q does not match N^{-1} mod p^k")
        return ctx


def build_montgomery_mul_base_p(c: Circuit, x: BasePNumber, y: BasePNumber | None,
                                ctx: MontgomeryContext, threshold: int = DEFAULT_THRESHOLD,
                                const_threshold: int = DEFAULT_THRESHOLD,
                                square: bool = False) -> BasePNumber:
    """x y p^{-k} mod N, fully reduced below N.

    theta = x y; mu = theta (-N^{-1}) mod p^k; zeta = (theta + mu N) / p^k;
    then zeta - N is kept whenever it is non-negative.
    """
    p, k = ctx.p, ctx.k
    if x.p != p or len(x) != k or (y is not None and (y.p != p or len(y) != k)):
        raise ContextViolation(f"operands must be {k}-digit base-{p} numbers")
    if square:
        theta = build_karatsuba_square(c, x, threshold)
    else:
        theta = build_karatsuba_mul(c, x, y, threshold)
    low = BasePNumber(p, theta.digits[:k], c.const(0, 2))
    mu = build_karatsuba_mul_const(c, low, ctx.q_neg, const_threshold, out_len=k)
    gamma = build_karatsuba_mul_const(c, mu, ctx.N, const_threshold)
    total = build_ripple_add(c, theta, gamma)
    zeta = list(total.digits[k:])

    nd = encode_base_p(ctx.N, p, k + 1)
    diff, neg = difference(c, p, zeta, nd, k + 1, b_const=True)
    # pick zeta when zeta - N < 0: out = diff + neg (zeta - diff)
    negp = bit_to_digit(c, neg, p)
    out = []
    for i in range(k):
        delta = c.add(zeta[i], c.scale(diff[i], p - 1))
        out.append(c.add(diff[i], c.mul(negp, delta)))
    return BasePNumber(p, tuple(out), c.const(0, 2), 0, ctx.N)


def build_montgomery_square_base_p(c: Circuit, x: BasePNumber, ctx: MontgomeryContext,
                                   threshold: int = DEFAULT_THRESHOLD,
                                   const_threshold: int = DEFAULT_THRESHOLD) -> BasePNumber:
    return build_montgomery_mul_base_p(c, x, None, ctx, threshold, const_threshold, square=True)
