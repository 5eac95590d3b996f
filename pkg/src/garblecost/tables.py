"""Shared, read-only projection tables.

Builders request the same maps many times (casts into a ring, residue
maps between primes), so tables are memoized and shared between gates.
"""
from functools import lru_cache

import numpy as np


def _frozen(a):
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@lru_cache(maxsize=None)
def scaled_residue(m: int, k: int, n: int) -> np.ndarray:
    """x -> (k x) mod n for x in [0, m)."""
    return _frozen(_affine(m, k, n))


@lru_cache(maxsize=None)
def digit_of(m: int, p: int, e: int, n: int) -> np.ndarray:
    """x -> floor(x / p^e) mod p, reduced into Z_n, for x in [0, m)."""
    return _frozen(np.arange(m, dtype=np.int64) // p ** e % p % n)


@lru_cache(maxsize=None)
def lift_crt(m: int, idem: int, n: int) -> np.ndarray:
    """x -> x * idem mod n: embeds a residue mod m into Z_n via a CRT idempotent."""
    return _frozen(_affine(m, idem, n))


def _affine(m, k, n):
    k %= n
    if m * k < 1 << 62:
        return np.arange(m, dtype=np.int64) * k % n
    return np.arange(m, dtype=object) * k % n
