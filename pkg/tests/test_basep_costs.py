import pytest
from hypothesis import given, settings, strategies as st

from garblecost.basep import (MontgomeryContext, build_karatsuba_mul, build_karatsuba_mul_const,
                              build_karatsuba_square, build_montgomery_mul_base_p, cost_karatsuba,
                              cost_montgomery, digit_mul_report, number_input,
                              optimize_montgomery, published_karatsuba,
                              published_karatsuba_square, published_montgomery)
from garblecost.basep.costs import (adder_cost, karatsuba_shape_cost, ripple_add_cost,
                                    single_digit_const_cost, single_digit_mul_cost)
from garblecost.circuit import Circuit


def built_karatsuba(m, p, mode, thr, const=None):
    c = Circuit()
    x = number_input(c, p, m)
    if mode == "square":
        build_karatsuba_square(c, x, thr)
    elif mode == "mul_const":
        build_karatsuba_mul_const(c, x, const, thr)
    else:
        build_karatsuba_mul(c, x, number_input(c, p, m), thr)
    return c.total_cost


def built_montgomery(ctx, square, thr, thr_c):
    c = Circuit()
    x = number_input(c, ctx.p, ctx.k)
    y = None if square else number_input(c, ctx.p, ctx.k)
    build_montgomery_mul_base_p(c, x, y, ctx, thr, thr_c, square)
    return c.total_cost


def test_small_cost_helpers():
    assert single_digit_mul_cost(5) == 58 and single_digit_mul_cost(2) == 2
    assert single_digit_const_cost(5, 3) == 20 and single_digit_const_cost(5, 1) == 0
    assert adder_cost(5, 2) == 17
    assert ripple_add_cost(7, 8) == adder_cost(7, 2) + 7 * adder_cost(7, 3)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_karatsuba_mirror_equals_construction(p, rng):
    for m in (1, 2, 3, 4, 7, 12, 17, 24):
        for thr in (1, 3, 4):
            assert cost_karatsuba(m, p, "mul", thr) == built_karatsuba(m, p, "mul", thr)
            sq = max(thr, 3)
            assert cost_karatsuba(m, p, "square", sq) == built_karatsuba(m, p, "square", sq)
            k = rng.randrange(p ** m)
            assert (cost_karatsuba(m, p, "mul_const", thr, const=k)
                    == built_karatsuba(m, p, "mul_const", thr, k))


def test_karatsuba_mirror_truncated_output():
    c = Circuit()
    build_karatsuba_mul_const(c, number_input(c, 5, 9), 12345, 2, out_len=9)
    assert cost_karatsuba(9, 5, "mul_const", 2, const=12345, out_len=9) == c.total_cost


def test_shape_cost_public_operand_discount():
    full, _ = karatsuba_shape_cost(5, [None] * 6, [None] * 6)
    part, _ = karatsuba_shape_cost(5, [None] * 6, [None] * 3 + [0] * 3)
    assert part < full


@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 12), st.integers(1, 6),
       st.sampled_from(["mul", "square", "mul_const"]), st.integers(0, 10 ** 12))
@settings(max_examples=60, deadline=None)
def test_karatsuba_mirror_property(p, m, thr, mode, k):
    if mode == "square":
        thr = max(thr, 3)
    k %= p ** m
    const = k if mode == "mul_const" else None
    assert cost_karatsuba(m, p, mode, thr, const=const) == built_karatsuba(m, p, mode, thr, const)


@pytest.mark.parametrize("p,k,N", [(2, 8, 251), (3, 5, 200), (5, 3, 117), (7, 4, 2400),
                                   (11, 6, 1234567), (2, 20, 1000001), (2, 2, 3)])
def test_montgomery_mirror_equals_construction(p, k, N):
    ctx = MontgomeryContext(p, k, N)
    for thr, thr_c in ((3, 1), (4, 4), (5, 2)):
        for square in (False, True):
            assert cost_montgomery(ctx, square, thr, thr_c) == built_montgomery(ctx, square, thr,
                                                                               thr_c)


def test_optimizer_returns_sweep_minimum():
    ctx = MontgomeryContext.for_bits(5, 64)
    cost, thr, thr_c = optimize_montgomery(ctx, False, range(1, 9), range(1, 9))
    assert cost == cost_montgomery(ctx, False, thr, thr_c)
    assert all(cost <= cost_montgomery(ctx, False, a, b) for a in range(1, 9) for b in range(1, 9))
    cost, thr, _ = optimize_montgomery(ctx, True, range(1, 9))
    assert thr >= 3


def test_published_forms():
    assert published_karatsuba(1, 5) == 60
    assert published_karatsuba(1, 5, const=True) == 20
    # T(2) = 3 T(1) + 20p - 12 + 28p - 20
    assert published_karatsuba(2, 5) == 3 * 60 + 100 - 12 + 140 - 20
    assert published_karatsuba_square(2, 5) == 2 * 8 + 60
    # S(4) = 2 S(2) + S(3) + 40p - 24 + 20p - 14 + 4p - 3
    assert published_karatsuba_square(4, 5) == (2 * published_karatsuba_square(2, 5)
                                                + published_karatsuba_square(3, 5)
                                                + 200 - 24 + 100 - 14 + 17)
    p, k = 5, 56
    assert published_montgomery(p, k) == (published_karatsuba(k, p)
                                          + 2 * published_karatsuba(k, p, True)
                                          + 18 * k * p - 2 * p - 12 * k + 1)


def test_digit_mul_report():
    for p in (3, 5, 7, 11, 13):
        d = digit_mul_report(p)
        assert d["stated"] == 14 * p - 10 and d["itemized"] == 14 * p - 12
        assert d["constructive"] == 14 * p - 12 and d["matches"] == "itemized" and d["flag"]
    d = digit_mul_report(2)
    assert d["constructive"] == 2 and d["matches"] == "neither"
