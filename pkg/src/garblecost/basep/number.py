"""p's-complement numbers as bundles of digit wires."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..circuit import Circuit
from ..errors import OutOfRange


def encode_base_p(x: int, p: int, m: int) -> list[int]:
    """Little-endian base-p digits of x, exactly m of them."""
    if not 0 <= x < p ** m:
        raise OutOfRange(f"{x} does not fit in {m} base-{p} digits")
    digits = []
    for _ in range(m):
        x, d = divmod(x, p)
        digits.append(d)
    return digits


def decode_base_p(digits, p: int) -> int:
    value = 0
    for d in reversed(list(digits)):
        value = value * p + int(d)
    return value


@dataclass(frozen=True)
class BasePNumber:
    """Signed integer held as digit wires mod p plus a sign wire mod 2.

    Value = sum(d_i p^i) - sign * p^len(digits) + offset.  ``offset`` is
    0 or 1 and records a pending "+1" left by negation.
    """

    p: int
    digits: tuple
    sign: int
    offset: int = 0
    bound: int | None = None

    def __len__(self):
        return len(self.digits)


def number_input(c: Circuit, p: int, m: int) -> BasePNumber:
    """Non-negative private number of m digits (public zero sign)."""
    digits = tuple(c.input(p) for _ in range(m))
    return BasePNumber(p, digits, c.const(0, 2), 0, p ** m)


def number_const(c: Circuit, x: int, p: int, m: int) -> BasePNumber:
    digits = tuple(c.const(d, p) for d in encode_base_p(x, p, m))
    return BasePNumber(p, digits, c.const(0, 2), 0, x + 1)


def signed_input(c: Circuit, p: int, m: int) -> BasePNumber:
    """Private number whose sign wire is also an input."""
    digits = tuple(c.input(p) for _ in range(m))
    return BasePNumber(p, digits, c.input(2), 0, p ** m)


def assign_number(v: BasePNumber, x, c: Circuit | None = None) -> dict:
    """Assignment for the private wires of v holding integer(s) x.

    Negative values are written in p's complement (sign wire private).
    """
    p, m = v.p, len(v.digits)
    # no numpy conversion here: mixed big ints would degrade to float64
    scalar = isinstance(x, (int, np.integer))
    xs = [int(x)] if scalar else [int(e) for e in x]
    rows = []
    for e in xs:
        e -= v.offset
        sign = 1 if e < 0 else 0
        rows.append((encode_base_p(e + sign * p ** m, p, m), sign))
    out = {}
    for i, w in enumerate(v.digits):
        col = np.array([r[0][i] for r in rows], dtype=np.int64)
        out[w] = int(col[0]) if scalar else col
    col = np.array([r[1] for r in rows], dtype=np.int64)
    out[v.sign] = int(col[0]) if scalar else col
    if c is not None:
        out = {w: val for w, val in out.items() if not c.is_public(w)}
    return out


def decode_number(vals, v: BasePNumber):
    """Integer(s) represented by v after ``Circuit.run``."""
    p, m = v.p, len(v.digits)
    cols = [vals[w] for w in v.digits] + [vals[v.sign]]
    if all(np.ndim(col) == 0 for col in cols):
        digits = [int(col) for col in cols[:-1]]
        return decode_base_p(digits, p) - int(cols[-1]) * p ** m + v.offset
    size = max(np.size(col) for col in cols)
    cols = [np.broadcast_to(col, (size,)) for col in cols]
    out = []
    for i in range(size):
        digits = [int(col[i]) for col in cols[:-1]]
        out.append(decode_base_p(digits, p) - int(cols[-1][i]) * p ** m + v.offset)
    return out
