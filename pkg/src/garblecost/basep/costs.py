"""Ciphertext counts for the base-p circuits, computed without a Circuit.

Each function replays the gate accounting of its builder on digit
*shapes*: a digit is ``None`` when private and its value when public.
Public digits matter because products and casts involving them are
free, so exact counts have to track where they appear (for instance
the public zero on top of X0 + X1 in an odd-size square).

The ``published_*`` functions are the published closed forms, kept for
side-by-side reporting.
"""
from __future__ import annotations

from functools import lru_cache

from ..modular import is_prime
from ..errors import NotPrime
from .montgomery import MontgomeryContext
from .number import decode_base_p, encode_base_p

PRIV = None


def _priv(*ds) -> bool:
    return any(d is None for d in ds)


def single_digit_mul_cost(p: int) -> int:
    """Gate count of the private digit multiplier."""
    return 2 if p == 2 else 14 * p - 12


def single_digit_const_cost(p: int, b: int | None = None) -> int:
    """Gate count of a digit times a public digit b (b <= 1 is free)."""
    if b is not None and b % p <= 1:
        return 0
    return 0 if p == 2 else 5 * p - 5


def adder_cost(p: int, m: int) -> int:
    return 2 * m * p - m - 1


def ripple_add_cost(p: int, d: int) -> int:
    """Two private d-digit numbers, all carries private."""
    return adder_cost(p, 2) + (d - 1) * adder_cost(p, 3)


class _Cols:
    """Shape-level twin of arith.Columns.

    A column only needs a few sums over its private terms: how many there
    are, the total of bound * weight, the total cast cost, and how many
    have weight 1 or a weight divisible by p.
    """

    def __init__(self, p: int, width: int):
        self.p, self.width = p, width
        n = width + 1
        self.nt = [0] * n
        self.bs = [0] * n
        self.cs = [0] * n
        self.n1 = [0] * n
        self.n0 = [0] * n
        self.cval = [0] * n
        self.cbound = [0] * n

    def const(self, j, value, bound=None):
        if j < self.width:
            self.cval[j] += value
            self.cbound[j] += value if bound is None else bound

    def _term(self, j, bound, weight, cast):
        self.nt[j] += 1
        self.bs[j] += bound * weight
        self.cs[j] += cast
        if weight == 1:
            self.n1[j] += 1
        if weight % self.p == 0:
            self.n0[j] += 1

    def digit(self, j, d, bound=None, weight=1):
        bound = self.p - 1 if bound is None else bound
        if d is not None:
            self.const(j, d * weight, bound * weight)
        elif j < self.width:
            self._term(j, bound, weight, self.p - 1)

    def bit(self, j, s, weight=1):
        if s is not None:
            self.const(j, s * weight, weight)
        elif j < self.width:
            self._term(j, 1, weight, 1)

    def digits(self, offset, ds, bound=None, weight=1):
        p = self.p
        bw = (p - 1 if bound is None else bound) * weight
        one, zero, cast = weight == 1, weight % p == 0, p - 1
        nt, bs, cs, n1, n0 = self.nt, self.bs, self.cs, self.n1, self.n0
        cval, cbound = self.cval, self.cbound
        for i in range(min(len(ds), self.width - offset)):
            d, j = ds[i], offset + i
            if d is None:
                nt[j] += 1
                bs[j] += bw
                cs[j] += cast
                if one:
                    n1[j] += 1
                if zero:
                    n0[j] += 1
            else:
                cval[j] += d * weight
                cbound[j] += bw

    def resolve(self, out_len=None, want_final=False):
        """(cost, digit shapes, final carry shape)."""
        p = self.p
        out_len = self.width if out_len is None else out_len
        w = self.width
        pad = max(0, out_len + 1 - (w + 1))
        nt, bs, cs = self.nt + [0] * pad, self.bs + [0] * pad, self.cs + [0] * pad
        n1, n0 = self.n1 + [0] * pad, self.n0 + [0] * pad
        cval, cbound = self.cval + [0] * pad, self.cbound + [0] * pad
        cost, out, final = 0, [], 0 if want_final else None
        for j in range(out_len):
            n, v, cb = nt[j], cval[j], cbound[j]
            if not n:
                out.append(v % p)
                if v // p or cb // p:
                    if j + 1 < out_len:
                        cval[j + 1] += v // p
                        cbound[j + 1] += cb // p
                    elif want_final:
                        final = v // p
                continue
            if n == 1 and n1[j] == 1 and cb == 0:
                out.append(PRIV)
                continue
            mx = bs[j] + cb
            out.append(v % p if n0[j] == n else PRIV)
            if mx < p:
                continue
            top = out_len - j if want_final else out_len - j - 1
            e, pe, carries = 1, p, []
            while pe <= mx and e <= top:
                carries.append((e, pe))
                e += 1
                pe *= p
            if not carries:
                continue
            cost += cs[j] + len(carries) * mx
            for e, pe in carries:
                b = min(p - 1, mx // pe)
                k = j + e
                if k == out_len:
                    final = PRIV
                    continue
                nt[k] += 1
                bs[k] += b
                n1[k] += 1
                if 2 * b < p - 1:
                    cost += b
                    cs[k] += b
                else:
                    cs[k] += p - 1
        return cost, out, final


# -- small gadgets ----------------------------------------------------------

def _mul(p, a, b):
    """c.mul on shapes: (cost, product shape)."""
    if a is not None and b is not None:
        return 0, a * b % p
    if a is None and b is None:
        return 2 * (p - 1), PRIV
    k = (a if b is None else b) % p
    return 0, (0 if k == 0 else PRIV)


def _sdm(p, a, b):
    """build_single_digit_mul on shapes: (cost, lo, hi)."""
    if a is not None and b is not None:
        return 0, a * b % p, a * b // p
    if a is None and b is None:
        return single_digit_mul_cost(p), PRIV, PRIV
    return _sdm_const(p, a if b is not None else b, b if b is not None else a)


def _sdm_const(p, a, b):
    b %= p
    if a is not None:
        return 0, a * b % p, a * b // p
    if b == 0:
        return 0, 0, 0
    if b == 1:
        return 0, PRIV, 0
    return 5 * p - 5, PRIV, PRIV


def _flip(p, d):
    return PRIV if d is None else p - 1 - d


def _bit_to_digit(p, s):
    return 1 if (s is None and p != 2) else 0


def _xor(*bits):
    if _priv(*bits):
        return PRIV
    return sum(bits) % 2


def _cond_flip(p, ds, s):
    """(cost, shapes) of conditional_flip; the Z_p copy of s is charged elsewhere."""
    cost, out = 0, []
    for d in ds:
        if p == 2:
            out.append(PRIV if _priv(d, s) else (d + s) % 2)
            continue
        delta = PRIV if d is None else ((p - 2) * d + p - 1) % p
        g, prod = _mul(p, s, delta)
        cost += g
        out.append(PRIV if _priv(d, prod) else (d + prod) % p)
    return cost, out


def _difference(p, a, b, width, b_const=False):
    cols = _Cols(p, width)
    for i in range(width):
        if i < len(a):
            cols.digit(i, a[i])
        if i >= len(b):
            cols.const(i, p - 1)
        elif b_const:
            cols.const(i, p - 1 - int(b[i]), p - 1)
        else:
            cols.digit(i, _flip(p, b[i]))
    cols.const(0, 1)
    cost, ds, carry = cols.resolve(width, want_final=True)
    return cost, ds, _xor(carry, 1)


def _abs(p, ds, s):
    if s == 0:
        return 0, list(ds)
    cost = _bit_to_digit(p, s)
    g, flipped = _cond_flip(p, ds, s)
    cols = _Cols(p, len(ds))
    cols.digits(0, flipped)
    cols.bit(0, s)
    r, out, _ = cols.resolve(len(ds))
    return cost + g + r, out


def _ripple(p, xs, ys):
    cost, out = 0, []
    for i, (a, b) in enumerate(zip(xs, ys)):
        ins = [a, b] if i == 0 else [a, b, carry]
        ring = len(ins) * p
        cost += sum(p - 1 for d in ins if d is None)
        if _priv(*ins):
            cost += ring - 1
            out.append(PRIV)
            carry = PRIV
        else:
            out.append(sum(ins) % p)
            carry = sum(ins) // p
    out.append(carry)
    return cost, out


# -- Karatsuba --------------------------------------------------------------

def _schoolbook(p, xd, yd, out_len, const):
    cols = _Cols(p, out_len)
    cost = 0
    for i, a in enumerate(xd):
        for j, b in enumerate(yd):
            pos = i + j
            if pos >= out_len:
                continue
            if pos + 1 >= out_len or p == 2:
                g, lo = _mul(p, a, b)
                cost += g
                cols.digit(pos, lo)
                continue
            g, lo, hi = _sdm_const(p, a, b) if const else _sdm(p, a, b)
            cost += g
            cols.digit(pos, lo)
            cols.digit(pos + 1, hi, p - 2)
    r, out, _ = cols.resolve(out_len)
    return cost + r, tuple(out)


def _kara(p, xd, yd, thr, out_len, const, memo):
    key = (xd, yd, out_len)
    if key in memo:
        return memo[key]
    m = len(xd)
    if m <= thr:
        res = _schoolbook(p, xd, yd, out_len, const)
        memo[key] = res
        return res
    h, ell = (m + 1) // 2, m // 2
    x0, x1, y0, y1 = xd[:h], xd[h:], yd[:h], yd[h:]
    ca, a = _kara(p, x0, y0, thr, 2 * h, const, memo)
    cc, c = _kara(p, x1, y1, thr, 2 * ell, const, memo)
    g, dx, sx = _difference(p, x0, x1, h)
    cost = ca + cc + g
    g, ax = _abs(p, dx, sx)
    cost += g
    if const:
        dy = decode_base_p(y0, p) - decode_base_p(y1, p)
        sy = int(dy < 0)
        ay = encode_base_p(abs(dy), p, h)
    else:
        g, dy, sy = _difference(p, y0, y1, h)
        cost += g
        g, ay = _abs(p, dy, sy)
        cost += g
    cb, b = _kara(p, tuple(ax), tuple(ay), thr, 2 * h, const, memo)
    cost += cb
    sigma = _xor(sx, sy, 1)
    cost += _bit_to_digit(p, sigma)
    g, bf = _cond_flip(p, b, sigma)
    cost += g
    cols = _Cols(p, out_len)
    cols.digits(0, a)
    cols.digits(h, a)
    cols.digits(h, c)
    cols.digits(2 * h, c)
    cols.digits(h, bf)
    cols.bit(h, sigma)
    for j in range(3 * h, out_len):
        cols.bit(j, sigma, p - 1)
    r, out, _ = cols.resolve(out_len)
    res = (cost + r, tuple(out))
    memo[key] = res
    return res


def _schoolbook_square(p, xd, out_len):
    cols = _Cols(p, out_len)
    cost = 0
    for i, a in enumerate(xd):
        pos = 2 * i
        if pos >= out_len:
            continue
        if p == 2:
            cols.digit(pos, a)
        elif pos + 1 >= out_len:
            if a is None:
                cost += p - 1
            cols.digit(pos, PRIV if a is None else a * a % p)
        else:
            if a is None:
                cost += 2 * (p - 1)
                cols.digit(pos, PRIV)
                cols.digit(pos + 1, PRIV, p - 2)
            else:
                cols.digit(pos, a * a % p)
                cols.digit(pos + 1, a * a // p, p - 2)
    for i, a in enumerate(xd):
        for j in range(i + 1, len(xd)):
            pos = i + j
            if pos >= out_len:
                continue
            b = xd[j]
            if pos + 1 >= out_len or p == 2:
                g, lo = _mul(p, a, b)
                cost += g
                cols.digit(pos, lo, weight=2)
                continue
            g, lo, hi = _sdm(p, a, b)
            cost += g
            cols.digit(pos, lo, weight=2)
            cols.digit(pos + 1, hi, p - 2, weight=2)
    r, out, _ = cols.resolve(out_len)
    return cost + r, tuple(out)


def _square(p, xd, thr, out_len, memo):
    key = (xd, out_len)
    if key in memo:
        return memo[key]
    m = len(xd)
    if m <= thr:
        res = _schoolbook_square(p, xd, out_len)
        memo[key] = res
        return res
    h = (m + 1) // 2
    x0, x1 = xd[:h], xd[h:]
    ca, a = _square(p, x0, thr, 2 * h, memo)
    cc, c = _square(p, x1, thr, 2 * (m // 2), memo)
    cols = _Cols(p, h + 1)
    cols.digits(0, x0)
    cols.digits(0, x1)
    g, s, _ = cols.resolve(h + 1)
    cb, b = _square(p, tuple(s), thr, 2 * h + 2, memo)
    cost = ca + cc + g + cb
    cols = _Cols(p, out_len)
    cols.digits(0, a)
    cols.digits(2 * h, c)
    cols.digits(h, b)
    for part in (a, c):
        for i in range(out_len - h):
            if i < len(part):
                cols.digit(h + i, _flip(p, part[i]))
            else:
                cols.const(h + i, p - 1)
    cols.const(h, 2)
    r, out, _ = cols.resolve(out_len)
    res = (cost + r, tuple(out))
    memo[key] = res
    return res


def _check(p, threshold, mode):
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    low = 3 if mode == "square" else 1
    if threshold < low:
        raise ValueError(f"{mode} threshold must be >= {low}")


def karatsuba_shape_cost(p, xd, yd=None, threshold=4, out_len=None, mode="mul"):
    """(cost, output shapes) for explicit operand shapes."""
    _check(p, threshold, mode)
    xd = tuple(xd)
    out_len = 2 * len(xd) if out_len is None else out_len
    if mode == "square":
        return _square(p, xd, threshold, out_len, {})
    return _kara(p, xd, tuple(yd), threshold, out_len, mode == "mul_const", {})


def cost_karatsuba(m: int, p: int, mode: str = "mul", threshold: int = 4,
                   const: int | None = None, out_len: int | None = None) -> int:
    """Ciphertexts for an m-digit Karatsuba product of private operands.

    mode is "mul", "square" or "mul_const"; the constant defaults to p^m - 1.
    """
    x = (PRIV,) * m
    if mode == "mul":
        y = x
    elif mode == "mul_const":
        y = encode_base_p(p ** m - 1 if const is None else const, p, m)
    elif mode == "square":
        y = None
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return karatsuba_shape_cost(p, x, y, threshold, out_len, mode)[0]


def cost_montgomery(ctx: MontgomeryContext, square: bool = False, threshold: int = 4,
                    const_threshold: int = 4) -> int:
    """Ciphertexts of build_montgomery_mul_base_p (or the square variant)."""
    _check(ctx.p, threshold, "square" if square else "mul")
    _check(ctx.p, const_threshold, "mul_const")
    return _montgomery_parts(ctx, square, threshold, const_threshold)[0]


def _montgomery_parts(ctx, square, threshold, const_threshold):
    p, k = ctx.p, ctx.k
    x = (PRIV,) * k
    if square:
        ct, theta = _square(p, x, threshold, 2 * k, {})
    else:
        ct, theta = _kara(p, x, x, threshold, 2 * k, False, {})
    cc = _const_part(ctx, theta, const_threshold)
    return (ct + cc, ct, cc)


@lru_cache(maxsize=4096)
def _const_part(ctx, theta, const_threshold):
    """Everything after theta: mu, gamma, the shifted sum and the final select.

    Cached because mul and square usually share theta's shape.
    """
    p, k = ctx.p, ctx.k
    cmu, mu = _kara(p, tuple(theta[:k]), tuple(encode_base_p(ctx.q_neg, p, k)),
                    const_threshold, k, True, {})
    cg, gamma = _kara(p, mu, tuple(encode_base_p(ctx.N, p, k)), const_threshold, 2 * k, True, {})
    return cmu + cg + _tail_cost(ctx, theta, gamma)


def _tail_cost(ctx, theta, gamma):
    p, k = ctx.p, ctx.k
    cr, total = _ripple(p, theta, gamma)
    zeta = total[k:]
    cd, diff, neg = _difference(p, zeta, encode_base_p(ctx.N, p, k + 1), k + 1, b_const=True)
    cost = cr + cd + _bit_to_digit(p, neg)
    for i in range(k):
        delta = PRIV if _priv(zeta[i], diff[i]) else (zeta[i] - diff[i]) % p
        cost += _mul(p, neg, delta)[0]
    return cost


def optimize_montgomery(ctx: MontgomeryContext, square: bool = False,
                        thresholds=range(1, 17), const_thresholds=None):
    """Cheapest (cost, threshold, const_threshold) over the given sweeps.

    The two thresholds are independent: theta's cost does not depend on
    how mu and gamma are built, and vice versa.
    """
    p, k = ctx.p, ctx.k
    const_thresholds = thresholds if const_thresholds is None else const_thresholds
    x = (PRIV,) * k
    best_t = None
    for t in thresholds:
        if square and t < 3:
            continue
        if square:
            ct, theta = _square(p, x, t, 2 * k, {})
        else:
            ct, theta = _kara(p, x, x, t, 2 * k, False, {})
        if best_t is None or ct < best_t[0]:
            best_t = (ct, t, theta)
    if best_t is None:
        raise ValueError("no usable threshold in the sweep")
    ct, t, theta = best_t
    best_c = min((_const_part(ctx, theta, tc), tc) for tc in const_thresholds)
    return ct + best_c[0], t, best_c[1]


# -- published closed forms -------------------------------------------------

STATED_DIGIT_MUL = "14p - 10"


def published_single_digit_mul(p: int) -> int:
    """The stated total for one private digit product."""
    return 14 * p - 10


def published_single_digit_itemized(p: int) -> int:
    """The sum of the itemized steps behind the stated total."""
    return 14 * p - 12


@lru_cache(maxsize=None)
def published_karatsuba(m: int, p: int, const: bool = False) -> int:
    """T(m) = 2T(ceil) + T(floor) + 10mp - 6m + 28 ceil p - 20 ceil, with T(1) a digit product."""
    if m <= 1:
        return 5 * p - 5 if const else published_single_digit_mul(p)
    h, ell = (m + 1) // 2, m // 2
    return (2 * published_karatsuba(h, p, const) + published_karatsuba(ell, p, const)
            + 10 * m * p - 6 * m + 28 * h * p - 20 * h)


@lru_cache(maxsize=None)
def published_karatsuba_square(m: int, p: int) -> int:
    """S(m) = S(floor) + S(ceil) + S(ceil + 1) + 10mp - 6m + 10 ceil p - 7 ceil + 4p - 3.

    The recurrence does not shrink for m <= 3, so those sizes use the
    bare digit products of a schoolbook square.
    """
    if m <= 3:
        return m * (2 * p - 2) + (m * (m - 1) // 2) * published_single_digit_mul(p)
    h, ell = (m + 1) // 2, m // 2
    return (published_karatsuba_square(ell, p) + published_karatsuba_square(h, p)
            + published_karatsuba_square(h + 1, p)
            + 10 * m * p - 6 * m + 10 * h * p - 7 * h + 4 * p - 3)


def published_montgomery(p: int, k: int, square: bool = False) -> int:
    """Published Montgomery total: product, two constant products, add, subtract."""
    first = published_karatsuba_square(k, p) if square else published_karatsuba(k, p)
    return (first + 2 * published_karatsuba(k, p, const=True)
            + 12 * k * p - 2 * p - 8 * k + 1 + 6 * k * p - 4 * k)


def digit_mul_report(p: int) -> dict:
    """Stated, itemized and counted costs of one private digit product."""
    from ..circuit import Circuit
    from .arith import build_single_digit_mul

    c = Circuit()
    build_single_digit_mul(c, c.input(p), c.input(p))
    counted = c.total_cost
    stated = published_single_digit_mul(p)
    itemized = published_single_digit_itemized(p)
    return {"p": p, "stated": stated, "itemized": itemized, "constructive": counted,
            "matches": "stated" if counted == stated else
                       "itemized" if counted == itemized else "neither",
            "flag": counted != stated}
