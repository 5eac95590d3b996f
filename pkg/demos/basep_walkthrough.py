"""Base-p Montgomery multiplication: correctness, cost and the digit product.

Builds a 64-bit Montgomery multiplier in base 5, checks it, then sweeps
the two Karatsuba thresholds and shows how the digit-product count
compares with the stated formula.
"""
import random

from garblecost.basep import (MontgomeryContext, build_montgomery_mul_base_p, cost_montgomery,
                              decode_number, digit_mul_report, number_input, assign_number,
                              optimize_montgomery, published_montgomery)
from garblecost.circuit import Circuit
from garblecost.modular import mod_inverse


def main(seed=5):
    rng = random.Random(seed)
    ctx = MontgomeryContext.for_bits(5, 64)
    print(f"p = {ctx.p}, k = {ctx.k} digits, N = {ctx.N}")

    c = Circuit()
    x, y = number_input(c, ctx.p, ctx.k), number_input(c, ctx.p, ctx.k)
    z = build_montgomery_mul_base_p(c, x, y, ctx)
    xs = [rng.randrange(ctx.N) for _ in range(300)]
    ys = [rng.randrange(ctx.N) for _ in range(300)]
    out = decode_number(c.run({**assign_number(x, xs), **assign_number(y, ys)}), z)
    minv = mod_inverse(ctx.M, ctx.N)
    print("300 random products correct:",
          out == [a * b * minv % ctx.N for a, b in zip(xs, ys)])
    print(f"thresholds 4/4: built {c.total_cost}, counted {cost_montgomery(ctx)}")

    cost, thr, thr_c = optimize_montgomery(ctx)
    print(f"best thresholds {thr}/{thr_c}: {cost} ciphertexts "
          f"(published closed form {published_montgomery(ctx.p, ctx.k)})")

    for p in (2, 3, 5, 7):
        d = digit_mul_report(p)
        print(f"digit product base {p}: stated {d['stated']}, itemized {d['itemized']}, "
              f"built {d['constructive']}")


if __name__ == "__main__":
    main()
