"""Ciphertext budget of a garbled modular exponentiation.

Compares RNS with the best base-p scheme for a full-length random
exponent at a few modulus sizes (formula counts only, no circuits).
"""
from garblecost import report


def main():
    for bits in (139, 585, 1364):
        sched = report.schedule_modexp(bits)
        costs = {}
        for scheme in ("rns", 3, 5):
            if scheme == "rns":
                sq, mu = (report.rns_row(bits, m, 0) for m in ("square", "mul"))
            else:
                sq, mu = (report.basep_row(bits, scheme, m, 0, range(3, 9), None, range(1, 9))
                          for m in ("square", "mul"))
            costs[sq.scheme] = sched.total(sq.formula_cost, mu.formula_cost)
        best = min(costs, key=costs.get)
        line = ", ".join(f"{k} {v:.3g}" for k, v in costs.items())
        print(f"{bits} bits ({sched.squares} squares, {sched.multiplies} multiplies): {line}"
              f" -> cheapest {best}")


if __name__ == "__main__":
    main()
