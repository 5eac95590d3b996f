"""Parameter sets for Bajard-Imbert multiplication in a double RNS.

Moduli are ordered ``(p0, b_1..b_k, b'_1..b'_k)`` everywhere: the
redundant modulus first, then the left basis, then the right basis.
"""
from __future__ import annotations

import bisect
import json
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import gcd, log2, prod

import numpy as np

from ..errors import Infeasible, ParamViolation
from ..modular import MAX_GADGET_PRIME, RnsBasis, gadget_primes, mod_inverse


@dataclass(frozen=True)
class RnsParams:
    k: int
    t: int
    b: tuple
    b_prime: tuple
    p0: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(int(q) for q in self.b))
        object.__setattr__(self, "b_prime", tuple(int(q) for q in self.b_prime))
        self.validate()

    def validate(self) -> None:
        k, t, n = self.k, self.t, self.n
        if k < 1 or len(self.b) != k or len(self.b_prime) != k:
            raise ParamViolation(f"need k={k} moduli in each basis")
        mods = self.moduli
        for i, a in enumerate(mods):
            for c in mods[i + 1:]:
                if gcd(a, c) != 1:
                    raise ParamViolation(f"moduli {a} and {c} are not coprime")
        if gcd(n, self.m) != 1:
            raise ParamViolation("n shares a factor with the left range")
        if self.p0 < k * t:
            raise ParamViolation(f"p0={self.p0} below k*t={k * t}")
        if not t * t * n < self.m:
            raise ParamViolation("left range too small for products of pseudo-residues")
        if not t * n < self.m_prime:
            raise ParamViolation("right range too small for reduced pseudo-residues")

    @property
    def moduli(self) -> tuple:
        return (self.p0,) + self.b + self.b_prime

    @property
    def m(self) -> int:
        return prod(self.b)

    @property
    def m_prime(self) -> int:
        return prod(self.b_prime)

    @property
    def left(self) -> range:
        """Positions of the left basis inside ``moduli``."""
        return range(1, 1 + self.k)

    @property
    def right(self) -> range:
        return range(1 + self.k, 1 + 2 * self.k)

    @property
    def star(self) -> tuple:
        """Positions of b* = {p0} and the right basis."""
        return (0,) + tuple(self.right)

    @cached_property
    def full_basis(self) -> RnsBasis:
        return RnsBasis(self.moduli)

    @cached_property
    def c_inv(self) -> tuple:
        """c_i^{-1} mod p_i for each left modulus, with c_i = m / p_i."""
        m = self.m
        return tuple(mod_inverse(m // q, q) for q in self.b)

    @cached_property
    def c_prime_inv(self) -> tuple:
        mp = self.m_prime
        return tuple(mod_inverse(mp // q, q) for q in self.b_prime)

    def to_dict(self) -> dict:
        return {"k": self.k, "t": self.t, "b": list(self.b), "b_prime": list(self.b_prime),
                "p0": self.p0, "n": self.n}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "RnsParams":
        return cls(int(d["k"]), int(d["t"]), tuple(d["b"]), tuple(d["b_prime"]),
                   int(d["p0"]), int(d["n"]))

    def with_modulus(self, n: int) -> "RnsParams":
        return RnsParams(self.k, self.t, self.b, self.b_prime, self.p0, n)


def default_modulus(n_bits: int) -> int:
    """Largest n_bits-bit odd modulus, used when only a size is given."""
    return (1 << n_bits) - 1


@lru_cache(maxsize=64)
def _candidates(n: int):
    primes = np.array([q for q in gadget_primes() if n % q], dtype=np.int64)
    logs = np.log2(primes.astype(float))
    # prefix sums taken separately over even and odd positions
    even = np.concatenate([[0.0], np.cumsum(np.where(np.arange(len(logs)) % 2 == 0, logs, 0.0))])
    odd = np.concatenate([[0.0], np.cumsum(np.where(np.arange(len(logs)) % 2 == 1, logs, 0.0))])
    return primes, even, odd


def _window_logs(even, odd, s, k):
    """log2 of prod(b), prod(b') for the window starting at s."""
    lo, hi = s, s + 2 * k
    se, so = even[hi] - even[lo], odd[hi] - odd[lo]
    return (se, so) if s % 2 == 0 else (so, se)


def select_rns_params(n_bits: int | None, k: int, *, n: int | None = None) -> RnsParams:
    """Greedy smallest-prime parameter choice for a given k.

    The 2k basis primes are the first window of consecutive primes (those
    not dividing n) whose interleaved halves both exceed t^2 n; even
    window positions go to b and odd ones to b'.  p0 is the smallest
    unused prime >= k t.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if n is None:
        if n_bits is None:
            raise ValueError("give n_bits or n")
        n = default_modulus(n_bits)
    t = k + 2
    target = t * t * n
    primes, even, odd = _candidates(n)
    last = len(primes) - 2 * k
    if last < 0:
        raise Infeasible(f"too few gadget primes for k={k}")
    need = log2(target)

    def ok_float(s):
        lb, lbp = _window_logs(even, odd, s, k)
        return min(lb, lbp) > need - 1e-6

    if not ok_float(last) and not _exact_ok(primes, last, k, target):
        raise Infeasible(f"no window of {2 * k} primes below {MAX_GADGET_PRIME} covers t^2 n")
    # both products grow with s, so binary search then settle exactly
    lo, hi = 0, last
    while lo < hi:
        mid = (lo + hi) // 2
        if ok_float(mid):
            hi = mid
        else:
            lo = mid + 1
    s = max(0, lo - 2)
    while s <= last and not _exact_ok(primes, s, k, target):
        s += 1
    if s > last:
        raise Infeasible(f"no feasible window for k={k}")
    window = [int(q) for q in primes[s:s + 2 * k]]
    used = set(window)
    i = bisect.bisect_left(primes, k * t)
    while i < len(primes) and int(primes[i]) in used:
        i += 1
    if i >= len(primes):
        raise Infeasible(f"no redundant modulus >= {k * t} below {MAX_GADGET_PRIME}")
    return RnsParams(k, t, tuple(window[0::2]), tuple(window[1::2]), int(primes[i]), n)


def _exact_ok(primes, s, k, target):
    w = [int(q) for q in primes[s:s + 2 * k]]
    return prod(w[0::2]) > target and prod(w[1::2]) > target


def optimize_rns(n_bits: int | None, mode: str = "mul", *, n: int | None = None,
                 k_max: int | None = None):
    """Sweep k and return ``(params, cost)`` with the lowest closed-form cost."""
    from .costs import cost_bajard_imbert

    if n is None:
        n = default_modulus(n_bits)
    if k_max is None:
        k_max = n.bit_length() // 4 + 8
    best = None
    for k in range(1, k_max + 1):
        try:
            params = select_rns_params(None, k, n=n)
        except Infeasible:
            continue
        cost = cost_bajard_imbert(params, mode)
        if best is None or cost < best[1]:
            best = (params, cost)
    if best is None:
        raise Infeasible(f"no feasible RNS parameters for a {n.bit_length()}-bit modulus")
    return best
