"""Small-modulus arithmetic: inverses, generators, discrete logs and CRT."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, prod

import numpy as np
from sympy import isprime, primerange, primitive_root

from .errors import LengthMismatch, NotCoprime, NotPrime, OutOfRange

# Every gadget modulus is a prime below this bound.
MAX_GADGET_PRIME = 1 << 16


def mod_inverse(a: int, m: int) -> int:
    """Return x in [0, m) with a*x = 1 mod m."""
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    if gcd(a, m) != 1:
        raise NotCoprime(f"gcd({a}, {m}) != 1")
    return pow(a, -1, m)


def is_prime(n: int) -> bool:
    return bool(isprime(n))


@lru_cache(maxsize=None)
def gadget_primes() -> tuple[int, ...]:
    """All primes below MAX_GADGET_PRIME, ascending."""
    return tuple(primerange(2, MAX_GADGET_PRIME))


def find_generator(p: int) -> int:
    """Smallest multiplicative generator of Z_p^*."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p == 2:
        return 1
    return int(primitive_root(p))


@dataclass(frozen=True)
class PrimeTable:
    """Generator and discrete-log tables for a small prime.

    ``power[a] = g^a mod p`` for a in [0, p-1) and ``dlog[power[a]] = a``.
    ``dlog[0]`` is -1 since zero has no logarithm.
    """

    p: int
    g: int
    power: np.ndarray = field(repr=False)
    dlog: np.ndarray = field(repr=False)


@lru_cache(maxsize=None)
def prime_table(p: int) -> PrimeTable:
    g = find_generator(p)
    power = np.empty(max(p - 1, 1), dtype=np.int64)
    dlog = np.full(p, -1, dtype=np.int64)
    x = 1
    for a in range(p - 1):
        power[a] = x
        dlog[x] = a
        x = x * g % p
    power.setflags(write=False)
    dlog.setflags(write=False)
    return PrimeTable(p, g, power, dlog)


@dataclass(frozen=True)
class RnsBasis:
    """An ordered set of pairwise-coprime moduli."""

    moduli: tuple[int, ...]

    def __post_init__(self):
        mods = tuple(int(q) for q in self.moduli)
        object.__setattr__(self, "moduli", mods)
        if not mods:
            raise ValueError("empty basis")
        for i, a in enumerate(mods):
            if a < 2:
                raise ValueError(f"modulus {a} < 2")
            for b in mods[i + 1:]:
                if gcd(a, b) != 1:
                    raise NotCoprime(f"moduli {a} and {b} share a factor")

    @property
    def range(self) -> int:
        return prod(self.moduli)

    @property
    def units(self) -> tuple[int, ...]:
        r = self.range
        return tuple(r // q for q in self.moduli)

    def __len__(self):
        return len(self.moduli)


def crt_combine(residues, basis: RnsBasis) -> int:
    """Unique x in [0, range) with x = residues[i] mod moduli[i]."""
    residues = list(residues)
    if len(residues) != len(basis.moduli):
        raise LengthMismatch(f"{len(residues)} residues for {len(basis.moduli)} moduli")
    r = basis.range
    total = 0
    for x, q, c in zip(residues, basis.moduli, basis.units):
        total += int(x) * c * pow(c, -1, q)
    return total % r


def to_rns(x: int, basis: RnsBasis) -> list[int]:
    if not 0 <= x < basis.range:
        raise OutOfRange(f"{x} outside [0, {basis.range})")
    return [x % q for q in basis.moduli]
