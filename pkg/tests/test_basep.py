import itertools
import time

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from garblecost.basep import (MontgomeryContext, build_abs, build_adder, build_digit_square,
                              build_karatsuba_mul, build_karatsuba_mul_const,
                              build_karatsuba_square, build_montgomery_mul_base_p,
                              build_montgomery_square_base_p, build_ripple_add,
                              build_schoolbook_mul, build_single_digit_mul,
                              build_single_digit_mul_const, decode_base_p, decode_number,
                              default_modulus, difference, digits_for_bits, encode_base_p,
                              negate, number_const, number_input, assign_number, signed_input)
from garblecost.circuit import Circuit
from garblecost.errors import (BaseMismatch, ContextViolation, NotPrime, OutOfRange,
                               TooManyOperands)
from garblecost.modular import mod_inverse

PRIMES = (2, 3, 5, 7, 11)


def same(got, want):
    """Compare a (possibly folded, hence scalar) output against per-sample values."""
    want = np.asarray(want)
    return np.array_equal(np.broadcast_to(np.asarray(got), want.shape), want)


def grid(p, m, n=2):
    """All n-tuples of m-digit base-p numbers, as columns."""
    vals = np.arange(p ** m)
    mesh = np.meshgrid(*([vals] * n), indexing="ij")
    return [a.ravel() for a in mesh]


def test_encode_examples():
    assert encode_base_p(11, 3, 3) == [2, 0, 1]
    assert encode_base_p(0, 5, 4) == [0, 0, 0, 0]
    assert encode_base_p(624, 5, 4) == [4, 4, 4, 4]
    with pytest.raises(OutOfRange):
        encode_base_p(625, 5, 4)
    assert all(decode_base_p(encode_base_p(x, 5, 4), 5) == x for x in range(625))


@given(st.sampled_from(PRIMES), st.integers(1, 40), st.integers(0, 10 ** 30))
def test_encode_roundtrip(p, m, x):
    x %= p ** m
    d = encode_base_p(x, p, m)
    assert len(d) == m and all(0 <= e < p for e in d) and decode_base_p(d, p) == x


# -- adders -----------------------------------------------------------------

@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_adder_exhaustive_and_cost(p):
    for m in range(2, min(p + 1, 5) + 1):
        c = Circuit()
        ins = [c.input(p) for _ in range(m)]
        low, carry = build_adder(c, ins, p)
        assert c.total_cost == 2 * m * p - m - 1
        c.mark_outputs([low, carry])
        cols = [a.ravel() for a in np.meshgrid(*([np.arange(p)] * m), indexing="ij")]
        lo, hi = c.evaluate(dict(zip(ins, cols)))
        s = sum(cols)
        assert np.array_equal(lo, s % p) and np.array_equal(hi, s // p)


def test_adder_limits():
    c = Circuit()
    with pytest.raises(TooManyOperands):
        build_adder(c, [c.input(3) for _ in range(5)], 3)
    with pytest.raises(BaseMismatch):
        build_adder(c, [c.input(3), c.input(5)], 3)
    c = Circuit()
    build_adder(c, [c.input(5), c.input(5)], 5)
    assert c.total_cost == 17


@pytest.mark.parametrize("p,d", [(3, 3), (5, 2)])
def test_ripple_add_exhaustive(p, d):
    c = Circuit()
    x, y = number_input(c, p, d), number_input(c, p, d)
    z = build_ripple_add(c, x, y)
    assert len(z) == d + 1
    assert c.total_cost == (2 * 2 * p - 3) + (d - 1) * (2 * 3 * p - 4)
    xs, ys = grid(p, d)
    out = decode_number(c.run({**assign_number(x, xs), **assign_number(y, ys)}), z)
    assert np.array_equal(np.array(out), xs + ys)


def test_ripple_add_random(rng):
    p, d = 7, 8
    c = Circuit()
    x, y = number_input(c, p, d), number_input(c, p, d)
    z = build_ripple_add(c, x, y)
    xs = [rng.randrange(p ** d) for _ in range(1000)]
    ys = [rng.randrange(p ** d) for _ in range(1000)]
    out = decode_number(c.run({**assign_number(x, xs), **assign_number(y, ys)}), z)
    assert out == [a + b for a, b in zip(xs, ys)]


# -- digit products ---------------------------------------------------------

@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_single_digit_mul_exhaustive(p):
    c = Circuit()
    a, b = c.input(p), c.input(p)
    low, carry = build_single_digit_mul(c, a, b)
    assert c.total_cost == (2 if p == 2 else 14 * p - 12)
    c.mark_outputs([low, carry])
    xs, ys = [v.ravel() for v in np.meshgrid(np.arange(p), np.arange(p))]
    lo, hi = c.evaluate({a: xs, b: ys})
    assert same(lo, xs * ys % p) and same(hi, xs * ys // p)


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_single_digit_mul_const_exhaustive(p):
    for b in range(p):
        c = Circuit()
        a = c.input(p)
        low, carry = build_single_digit_mul_const(c, a, b)
        assert c.total_cost == (0 if b <= 1 else 5 * p - 5)
        c.mark_outputs([low, carry])
        lo, hi = c.evaluate({a: np.arange(p)})
        assert same(lo, np.arange(p) * b % p)
        assert same(hi, np.arange(p) * b // p)
    c = Circuit()
    build_single_digit_mul_const(c, c.input(5), 3)
    assert c.total_cost == 20


def test_single_digit_mul_routes_public_operand():
    c = Circuit()
    build_single_digit_mul(c, c.const(3, 7), c.input(7))
    assert c.total_cost == 5 * 7 - 5


def test_single_digit_mul_needs_prime():
    c = Circuit()
    with pytest.raises(NotPrime):
        build_single_digit_mul(c, c.input(9), c.input(9))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_digit_square(p):
    c = Circuit()
    a = c.input(p)
    lo, hi = build_digit_square(c, a)
    c.mark_outputs([lo, hi])
    got = c.evaluate({a: np.arange(p)})
    assert same(got[0], np.arange(p) ** 2 % p)
    assert same(got[1], np.arange(p) ** 2 // p)


# -- signs ------------------------------------------------------------------

@pytest.mark.parametrize("p,m", [(2, 4), (3, 3), (5, 2)])
def test_negate_involution_and_value(p, m):
    c = Circuit()
    x = signed_input(c, p, m)
    nx, nnx = negate(c, x), negate(c, negate(c, x))
    assert c.total_cost == 0
    xs = list(range(-p ** m, p ** m))
    vals = c.run(assign_number(x, xs))
    assert decode_number(vals, nx) == [-v for v in xs]
    assert decode_number(vals, nnx) == xs
    assert nnx.offset == x.offset


@pytest.mark.parametrize("p,m", [(2, 4), (3, 3), (5, 2), (7, 2)])
def test_abs_exhaustive(p, m):
    c = Circuit()
    x = signed_input(c, p, m)
    ax = build_abs(c, x)
    xs = list(range(-p ** m + 1, p ** m))
    assert decode_number(c.run(assign_number(x, xs)), ax) == [abs(v) for v in xs]
    # negated inputs carry a pending +1
    c = Circuit()
    x = signed_input(c, p, m)
    ax = build_abs(c, negate(c, x))
    xs = list(range(-p ** m + 1, p ** m))
    assert decode_number(c.run(assign_number(x, xs)), ax) == [abs(v) for v in xs]


@pytest.mark.parametrize("p", [2, 3, 5])
def test_difference_exhaustive(p):
    w = 2
    c = Circuit()
    a, b = [c.input(p) for _ in range(w)], [c.input(p) for _ in range(w)]
    digits, neg = difference(c, p, a, b, w)
    c.mark_outputs(list(digits) + [neg])
    xs, ys = grid(p, w)
    dx = [xs // p ** i % p for i in range(w)]
    dy = [ys // p ** i % p for i in range(w)]
    got = c.evaluate({**dict(zip(a, dx)), **dict(zip(b, dy))})
    diff = sum(g * p ** i for i, g in enumerate(got[:w]))
    assert np.array_equal(diff, (xs - ys) % p ** w)
    assert np.array_equal(got[w], (xs < ys).astype(int))


# -- Karatsuba --------------------------------------------------------------

def _check_product(p, m, xs, ys, thr=4, square=False, const=None):
    c = Circuit()
    x = number_input(c, p, m)
    if square:
        z = build_karatsuba_square(c, x, max(thr, 3))
        a = assign_number(x, xs)
        want = [v * v for v in xs]
    elif const is not None:
        z = build_karatsuba_mul_const(c, x, const, thr)
        a = assign_number(x, xs)
        want = [v * const for v in xs]
    else:
        y = number_input(c, p, m)
        z = build_karatsuba_mul(c, x, y, thr)
        a = {**assign_number(x, xs), **assign_number(y, ys)}
        want = [u * v for u, v in zip(xs, ys)]
    assert same(decode_number(c.run(a), z), want)
    return c


@pytest.mark.parametrize("p", PRIMES)
@pytest.mark.parametrize("m", [1, 2, 3, 5, 8, 13])
def test_karatsuba_random(p, m, rng):
    xs = [rng.randrange(p ** m) for _ in range(60)] + [0, p ** m - 1]
    ys = [rng.randrange(p ** m) for _ in range(60)] + [p ** m - 1, p ** m - 1]
    for thr in (1, 2, 4):
        _check_product(p, m, xs, ys, thr)
        _check_product(p, m, xs, ys, thr, const=ys[0])
    _check_product(p, m, xs, ys, 3, square=True)


@pytest.mark.parametrize("p,m", [(2, 3), (3, 2), (5, 2)])
def test_karatsuba_exhaustive_small(p, m):
    xs, ys = grid(p, m)
    for thr in (1, 2):
        _check_product(p, m, xs.tolist(), ys.tolist(), thr)
    _check_product(p, m, xs.tolist(), None, 3, square=True)


def test_karatsuba_edge_cases():
    for p in (3, 5):
        _check_product(p, 6, [0, 1, 7, p ** 6 - 1], [0, 1, 5, 3], 2)
        _check_product(p, 6, [0, 1, p ** 6 - 1], None, 3, square=True)
        _check_product(p, 6, [0, 1, 9], None, 2, const=0)
        _check_product(p, 6, [0, 1, 9], None, 2, const=1)


def test_karatsuba_threshold_checks():
    c = Circuit()
    x = number_input(c, 3, 4)
    with pytest.raises(ValueError):
        build_karatsuba_square(c, x, 2)
    with pytest.raises(ValueError):
        build_karatsuba_mul(c, x, x, 0)


def test_karatsuba_deterministic():
    def dump():
        c = Circuit()
        build_karatsuba_mul(c, number_input(c, 5, 9), number_input(c, 5, 9), 2)
        return c.to_json()
    assert dump() == dump()


def test_const_cheaper_than_private(rng):
    for p in (3, 5, 7):
        for m in (4, 8, 16):
            k = rng.randrange(p ** m)
            c1, c2 = Circuit(), Circuit()
            build_karatsuba_mul(c1, number_input(c1, p, m), number_input(c1, p, m))
            build_karatsuba_mul_const(c2, number_input(c2, p, m), k)
            assert c2.total_cost < c1.total_cost


def test_schoolbook_matches_oracle(rng):
    c = Circuit()
    x, y = number_input(c, 7, 5), number_input(c, 7, 5)
    z = build_schoolbook_mul(c, x, y)
    xs = [rng.randrange(7 ** 5) for _ in range(50)]
    ys = [rng.randrange(7 ** 5) for _ in range(50)]
    vals = c.run({**assign_number(x, xs), **assign_number(y, ys)})
    assert decode_number(vals, z) == [a * b for a, b in zip(xs, ys)]


# -- Montgomery -------------------------------------------------------------

def test_context_examples():
    ctx = MontgomeryContext(5, 3, 117)
    assert ctx.q == 78 and 117 * 78 % 125 == 1
    assert MontgomeryContext.from_dict(ctx.to_dict()) == ctx
    with pytest.raises(ContextViolation):
        MontgomeryContext(5, 3, 115)
    with pytest.raises(ContextViolation):
        MontgomeryContext(5, 3, 125)
    with pytest.raises(ContextViolation):
        MontgomeryContext.from_dict({"p": 5, "k": 3, "N": 117, "q": 1})
    assert digits_for_bits(2, 8) == 8 and digits_for_bits(3, 8) == 6
    assert default_modulus(3, 8) == 253 and default_modulus(2, 8) == 255


def _run_mont(ctx, xs, ys, square=False, thr=4, thr_c=4):
    c = Circuit()
    x = number_input(c, ctx.p, ctx.k)
    if square:
        z = build_montgomery_square_base_p(c, x, ctx, max(thr, 3), thr_c)
        a = assign_number(x, xs)
    else:
        y = number_input(c, ctx.p, ctx.k)
        z = build_montgomery_mul_base_p(c, x, y, ctx, thr, thr_c)
        a = {**assign_number(x, xs), **assign_number(y, ys)}
    return c, decode_number(c.run(a), z)


def test_montgomery_tiny_example():
    ctx = MontgomeryContext(2, 2, 3)
    _, out = _run_mont(ctx, [1, 0, 2], [1, 2, 2])
    minv = mod_inverse(4, 3)
    assert out == [1 * minv % 3, 0, 4 * minv % 3]
    assert out[0] == 1


@pytest.mark.parametrize("p,k,N", [(2, 8, 251), (3, 5, 200), (5, 3, 117), (7, 4, 2400),
                                   (11, 3, 1000)])
def test_montgomery_random(p, k, N, rng):
    ctx = MontgomeryContext(p, k, N)
    xs = [rng.randrange(N) for _ in range(150)] + [0, N - 1]
    ys = [rng.randrange(N) for _ in range(150)] + [N - 1, N - 1]
    minv = mod_inverse(ctx.M, N)
    for thr, thr_c in ((1, 1), (4, 4), (2, 3)):
        _, out = _run_mont(ctx, xs, ys, thr=thr, thr_c=thr_c)
        assert out == [a * b * minv % N for a, b in zip(xs, ys)]
        _, out = _run_mont(ctx, xs, None, square=True, thr=thr, thr_c=thr_c)
        assert out == [a * a * minv % N for a in xs]


def test_montgomery_chain_stays_reduced(rng):
    ctx = MontgomeryContext(3, 6, 701)
    c = Circuit()
    x, y = number_input(c, 3, 6), number_input(c, 3, 6)
    z = build_montgomery_mul_base_p(c, build_montgomery_mul_base_p(c, x, y, ctx), y, ctx)
    xs = [rng.randrange(701) for _ in range(100)]
    ys = [rng.randrange(701) for _ in range(100)]
    minv = mod_inverse(ctx.M, 701)
    out = decode_number(c.run({**assign_number(x, xs), **assign_number(y, ys)}), z)
    assert out == [a * b * b * minv * minv % 701 for a, b in zip(xs, ys)]


def test_montgomery_rejects_wrong_shape():
    ctx = MontgomeryContext(5, 3, 117)
    c = Circuit()
    with pytest.raises(ContextViolation):
        build_montgomery_mul_base_p(c, number_input(c, 5, 2), number_input(c, 5, 2), ctx)


def test_assignment_keeps_big_integers_exact(rng):
    # a mix of values below and above 2^63 must not pass through float64
    ctx = MontgomeryContext.for_bits(5, 64)
    xs = [3, 2 ** 63 + 1, ctx.N - 1] + [rng.randrange(ctx.N) for _ in range(20)]
    ys = [ctx.N - 2, 5, 2 ** 64 - 7] + [rng.randrange(ctx.N) for _ in range(20)]
    _, out = _run_mont(ctx, xs, ys)
    minv = mod_inverse(ctx.M, ctx.N)
    assert out == [a * b * minv % ctx.N for a, b in zip(xs, ys)]
