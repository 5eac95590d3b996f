"""Walk through one double-RNS Montgomery multiplication.

Picks parameters for a 61-bit modulus, builds the circuit, checks it
on random inputs and compares the gate count with the closed form.
"""
import random

from garblecost.circuit import Circuit
from garblecost.modular import mod_inverse
from garblecost.rns import build_bajard_imbert_mul, cost_bajard_imbert, rns_input, select_rns_params
from garblecost.rns.engine import assign, decode


def main(seed=5):
    rng = random.Random(seed)
    n = (1 << 61) - 1
    params = select_rns_params(None, 5, n=n)
    print(f"n = 2^61 - 1, k = {params.k}, t = {params.t}")
    print(f"  p0 = {params.p0}, b = {params.b}, b' = {params.b_prime}")

    c = Circuit()
    x, y = rns_input(c, params), rns_input(c, params)
    z = build_bajard_imbert_mul(c, x, y, params)
    print(f"circuit: {len(c.gates)} gates, {c.total_cost} ciphertexts "
          f"(closed form {cost_bajard_imbert(params, 'mul')})")

    xs = [rng.randrange(x.bound) for _ in range(1000)]
    ys = [rng.randrange(y.bound) for _ in range(1000)]
    out = decode(c.run({**assign(x, xs), **assign(y, ys)}), z)
    minv = mod_inverse(params.m, n)
    ok = all(o % n == a * b * minv % n and o < z.bound for a, b, o in zip(xs, ys, out))
    print(f"1000 random products reduce correctly: {ok}; output bound {z.bound} = "
          f"{z.bound / n:.2f} n")


if __name__ == "__main__":
    main()
