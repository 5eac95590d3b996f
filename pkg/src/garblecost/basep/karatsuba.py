"""Karatsuba multiplication and squaring of base-p numbers.

With h = ceil(m/2), X = X0 + X1 p^h and Y = Y0 + Y1 p^h:

    X Y = A + (A + C - X'Y') p^h + C p^{2h}
    A = X0 Y0,  C = X1 Y1,  X' = X0 - X1,  Y' = Y0 - Y1

X'Y' is formed as |X'| |Y'| with its sign applied by a conditional flip.
Squaring uses B = (X0 + X1)^2 and the middle term B - A - C instead.
Operands of size <= threshold fall back to schoolbook products.
"""
from __future__ import annotations

from ..circuit import Circuit
from ..errors import BaseMismatch
from .arith import (Columns, bit_to_digit, build_abs, build_digit_square,
                    build_single_digit_mul, build_single_digit_mul_const,
                    conditional_flip, difference, flip_digit)
from .number import BasePNumber, decode_base_p, encode_base_p

DEFAULT_THRESHOLD = 4


def _require_unsigned(c: Circuit, x: BasePNumber) -> None:
    if not c.is_public(x.sign) or c.value(x.sign) or x.offset:
        raise ValueError("Karatsuba operands must be non-negative and normalized")


def _result(c, p, digits):
    return BasePNumber(p, tuple(digits), c.const(0, 2))


def _schoolbook(c: Circuit, p: int, xd, yd, out_len: int, const: bool):
    cols = Columns(c, p, out_len)
    for i, a in enumerate(xd):
        for j, b in enumerate(yd):
            pos = i + j
            if pos >= out_len:
                continue
            if pos + 1 >= out_len or p == 2:
                low = c.scale(a, b) if const else c.mul(a, b)
                cols.digit(pos, low)
                continue
            if const:
                lo, hi = build_single_digit_mul_const(c, a, b)
            else:
                lo, hi = build_single_digit_mul(c, a, b)
            cols.digit(pos, lo)
            cols.digit(pos + 1, hi, p - 2)
    return cols.resolve(out_len)[0]


def _karatsuba(c: Circuit, p: int, xd, yd, threshold: int, out_len: int, const: bool):
    m = len(xd)
    if m <= threshold:
        return _schoolbook(c, p, xd, yd, out_len, const)
    h, l = (m + 1) // 2, m // 2
    x0, x1, y0, y1 = xd[:h], xd[h:], yd[:h], yd[h:]
    a = _karatsuba(c, p, x0, y0, threshold, 2 * h, const)
    cc = _karatsuba(c, p, x1, y1, threshold, 2 * l, const)
    dx, sx = difference(c, p, x0, x1, h)
    ax = build_abs(c, BasePNumber(p, tuple(dx), sx)).digits
    if const:
        dy = decode_base_p(y0, p) - decode_base_p(y1, p)
        sy = c.const(int(dy < 0), 2)
        ay = encode_base_p(abs(dy), p, h)
    else:
        dy, sy = difference(c, p, y0, y1, h)
        ay = build_abs(c, BasePNumber(p, tuple(dy), sy)).digits
    b = _karatsuba(c, p, list(ax), list(ay), threshold, 2 * h, const)

    # sigma = 1 when the middle term is A + C + B, i.e. X'Y' < 0
    sigma = c.add(sx, sy, c.const(1, 2))
    sp = bit_to_digit(c, sigma, p)
    bf = conditional_flip(c, b, sigma, sp)
    cols = Columns(c, p, out_len)
    cols.digits(0, a)
    cols.digits(h, a)
    cols.digits(h, cc)
    cols.digits(2 * h, cc)
    cols.digits(h, bf)
    cols.bit(h, sigma, sp)
    for j in range(3 * h, out_len):
        cols.bit(j, sigma, sp, p - 1)
    return cols.resolve(out_len)[0]


def build_karatsuba_mul(c: Circuit, x: BasePNumber, y: BasePNumber,
                        threshold: int = DEFAULT_THRESHOLD, out_len: int | None = None) -> BasePNumber:
    """x * y (mod p^out_len, default 2m digits)."""
    if x.p != y.p:
        raise BaseMismatch("operands in different bases")
    if len(x) != len(y):
        raise ValueError("operands must have the same digit count")
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    _require_unsigned(c, x)
    _require_unsigned(c, y)
    m = len(x)
    out_len = 2 * m if out_len is None else out_len
    digits = _karatsuba(c, x.p, list(x.digits), list(y.digits), threshold, out_len, False)
    return _result(c, x.p, digits)


def build_karatsuba_mul_const(c: Circuit, x: BasePNumber, k: int,
                              threshold: int = DEFAULT_THRESHOLD,
                              out_len: int | None = None) -> BasePNumber:
    """x * k for a public constant k < p^m."""
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    _require_unsigned(c, x)
    m = len(x)
    out_len = 2 * m if out_len is None else out_len
    kd = encode_base_p(k, x.p, m)
    digits = _karatsuba(c, x.p, list(x.digits), kd, threshold, out_len, True)
    return _result(c, x.p, digits)


def build_schoolbook_mul(c: Circuit, x: BasePNumber, y: BasePNumber) -> BasePNumber:
    return build_karatsuba_mul(c, x, y, threshold=max(1, len(x)))


def _schoolbook_square(c: Circuit, p: int, xd, out_len: int):
    cols = Columns(c, p, out_len)
    for i, a in enumerate(xd):
        pos = 2 * i
        if pos >= out_len:
            continue
        if p == 2:
            cols.digit(pos, a)
        elif pos + 1 >= out_len:
            cols.digit(pos, c.square(a))
        else:
            lo, hi = build_digit_square(c, a)
            cols.digit(pos, lo)
            cols.digit(pos + 1, hi, p - 2)
    for i, a in enumerate(xd):
        for j in range(i + 1, len(xd)):
            pos = i + j
            if pos >= out_len:
                continue
            b = xd[j]
            if pos + 1 >= out_len or p == 2:
                cols.digit(pos, c.mul(a, b), weight=2)
                continue
            lo, hi = build_single_digit_mul(c, a, b)
            cols.digit(pos, lo, weight=2)
            cols.digit(pos + 1, hi, p - 2, weight=2)
    return cols.resolve(out_len)[0]


def _square(c: Circuit, p: int, xd, threshold: int, out_len: int):
    m = len(xd)
    if m <= threshold:
        return _schoolbook_square(c, p, xd, out_len)
    h, l = (m + 1) // 2, m // 2
    x0, x1 = xd[:h], xd[h:]
    a = _square(c, p, x0, threshold, 2 * h)
    cc = _square(c, p, x1, threshold, 2 * l)
    cols = Columns(c, p, h + 1)
    cols.digits(0, x0)
    cols.digits(0, x1)
    s = cols.resolve(h + 1)[0]
    b = _square(c, p, s, threshold, 2 * h + 2)

    # A + (B - A - C) p^h + C p^{2h}, negations taken mod p^{out_len - h}
    cols = Columns(c, p, out_len)
    cols.digits(0, a)
    cols.digits(2 * h, cc)
    cols.digits(h, b)
    for part in (a, cc):
        for i in range(out_len - h):
            if i < len(part):
                cols.digit(h + i, flip_digit(c, part[i]))
            else:
                cols.const(h + i, p - 1)
    cols.const(h, 2)
    return cols.resolve(out_len)[0]


def build_karatsuba_square(c: Circuit, x: BasePNumber, threshold: int = DEFAULT_THRESHOLD,
                           out_len: int | None = None) -> BasePNumber:
    """x^2; threshold must be at least 3 so that the (h+1)-digit square shrinks."""
    if threshold < 3:
        raise ValueError("squaring threshold must be >= 3")
    _require_unsigned(c, x)
    m = len(x)
    out_len = 2 * m if out_len is None else out_len
    return _result(c, x.p, _square(c, x.p, list(x.digits), threshold, out_len))
