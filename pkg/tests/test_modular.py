from math import gcd

import pytest
from hypothesis import given, strategies as st
from sympy import primerange

from garblecost.errors import LengthMismatch, NotCoprime, NotPrime, OutOfRange
from garblecost.modular import (RnsBasis, crt_combine, find_generator, gadget_primes,
                                is_prime, mod_inverse, prime_table, to_rns)


def test_mod_inverse_examples():
    assert mod_inverse(3, 7) == 5
    assert mod_inverse(1, 97) == 1
    with pytest.raises(NotCoprime):
        mod_inverse(2, 4)


def test_mod_inverse_exhaustive_small():
    for m in range(2, 400):
        for a in range(m):
            if gcd(a, m) == 1:
                assert a * mod_inverse(a, m) % m == 1


@given(st.integers(2, 10 ** 4), st.integers(0, 10 ** 6))
def test_mod_inverse_law(m, a):
    if gcd(a, m) == 1:
        x = mod_inverse(a, m)
        assert 0 <= x < m and a * x % m == 1
    else:
        with pytest.raises(NotCoprime):
            mod_inverse(a, m)


def test_find_generator_examples():
    assert find_generator(5) == 2
    assert find_generator(3) == 2
    assert find_generator(7) == 3
    with pytest.raises(NotPrime):
        find_generator(9)


def test_generator_is_smallest_and_generates():
    for p in primerange(3, 1000):
        g = find_generator(p)
        assert len({pow(g, a, p) for a in range(p - 1)}) == p - 1
        for h in range(2, g):
            assert len({pow(h, a, p) for a in range(p - 1)}) < p - 1


def test_prime_table_dlog():
    for p in (3, 5, 7, 11, 13, 101):
        tab = prime_table(p)
        for a in range(p - 1):
            assert tab.power[a] == pow(tab.g, a, p)
            assert tab.dlog[tab.power[a]] == a
        assert tab.dlog[0] == -1


def test_gadget_primes():
    ps = gadget_primes()
    assert ps[0] == 2 and ps[-1] < 1 << 16
    assert all(is_prime(p) for p in ps[:200])


def test_crt_examples():
    b = RnsBasis((3, 5))
    assert crt_combine([1, 2], b) == 7
    assert crt_combine([0, 0, 0], RnsBasis((3, 5, 7))) == 0
    assert crt_combine([14 % 3, 14 % 5], b) == 14
    assert to_rns(7, b) == [1, 2]
    assert to_rns(0, RnsBasis((11, 13))) == [0, 0]
    assert to_rns(14, b) == [2, 4]
    with pytest.raises(LengthMismatch):
        crt_combine([1], b)
    with pytest.raises(OutOfRange):
        to_rns(15, b)


def test_basis_units_and_coprimality():
    b = RnsBasis((5, 7, 11))
    assert b.range == 385
    assert all(c * q == b.range for c, q in zip(b.units, b.moduli))
    with pytest.raises(NotCoprime):
        RnsBasis((6, 9))


def test_crt_roundtrip_exhaustive():
    b = RnsBasis((7, 11, 13, 16))
    for x in range(b.range):
        assert crt_combine(to_rns(x, b), b) == x


@given(st.lists(st.sampled_from([3, 5, 7, 11, 13, 17, 19, 23, 29, 31]), min_size=1,
                max_size=6, unique=True), st.integers(0, 10 ** 12))
def test_crt_roundtrip_property(mods, x):
    b = RnsBasis(tuple(mods))
    x %= b.range
    assert crt_combine(to_rns(x, b), b) == x
