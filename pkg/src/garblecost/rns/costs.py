"""Closed-form ciphertext counts for the RNS builders.

These never touch a circuit.  Public components (a constant operand with
a zero residue) make some projections free, so the exact counts take a
visibility mask: ``mask[i]`` is True when component i is private.
"""
from __future__ import annotations

from .engine import mac_rounds
from .params import RnsParams


def _sigma(moduli) -> int:
    return sum(q - 1 for q in moduli)


def reduction_cost_formula(params: RnsParams) -> int:
    """(k+1) * sum over all moduli of (p-1), minus (p0-1)."""
    return (params.k + 1) * _sigma(params.moduli) - (params.p0 - 1)


def reduction_cost(params: RnsParams, mask) -> tuple[int, list]:
    """Cost of one reduction and the visibility mask of its output."""
    mods, k = params.moduli, params.k
    cost = 0
    any_mu = False
    for pos in params.left:
        if mask[pos]:
            cost += (k + 1) * (mods[pos] - 1)
            any_mu = True
    out = list(mask)
    for pos in params.star:
        out[pos] = bool(mask[pos] or any_mu)
    any_eta = False
    for pos in params.right:
        if out[pos]:
            cost += (k + 1) * (mods[pos] - 1)
            any_eta = True
    omega = out[0] or any_eta
    if omega:
        cost += k * (params.p0 - 1)
    for pos in params.left:
        out[pos] = bool(any_eta or omega)
    return cost, out


def product_cost(params: RnsParams, xmask, ymask=None, const=None) -> tuple[int, list]:
    """Componentwise product against a private value (ymask) or a constant."""
    cost, out = 0, []
    for i, q in enumerate(params.moduli):
        if const is not None:
            out.append(bool(xmask[i] and const % q))
        elif xmask[i] and ymask[i]:
            cost += 2 * (q - 1)
            out.append(True)
        else:
            raise ValueError("use const= for public operands")
    return cost, out


def square_cost(params: RnsParams, xmask) -> tuple[int, list]:
    return sum(q - 1 for q, v in zip(params.moduli, xmask) if v), list(xmask)


def cost_bajard_imbert(params: RnsParams, mode: str = "mul", const: int | None = None) -> int:
    """Ciphertexts for one Montgomery multiplication.

    mul:    sum(2p-2) + R
    square: sum(p-1) + R
    const:  R, where R = (k+1) sum(p-1) - (p0-1)

    With ``const`` given, components where the constant has a zero
    residue are treated as public and the count is exact for that value.
    """
    sigma = _sigma(params.moduli)
    if mode == "mul":
        return 2 * sigma + reduction_cost_formula(params)
    if mode == "square":
        return sigma + reduction_cost_formula(params)
    if mode != "const":
        raise ValueError(f"unknown mode {mode!r}")
    if const is None:
        return reduction_cost_formula(params)
    mask = [bool(const % q) for q in params.moduli]
    return reduction_cost(params, mask)[0]


def mac_cost(params: RnsParams, d, masks=None) -> tuple[int, list]:
    """Exact cost of build_multiply_accumulate for constants d."""
    d = list(d)
    full = [True] * len(params.moduli)
    masks = list(masks) if masks is not None else [full] * len(d)
    t, n = params.t, params.n
    lift = pow(params.m, len(mac_rounds(len(d), t)), n)
    vals = [product_cost(params, mk, const=di * lift % n)[1] for di, mk in zip(d, masks)]
    cost = 0

    def reduce_chunk(chunk):
        nonlocal cost
        merged = [any(col) for col in zip(*chunk)]
        rc, out = reduction_cost(params, merged)
        cost += rc
        return out

    while len(vals) > t:
        vals = [reduce_chunk(vals[i:i + t]) for i in range(0, len(vals), t)]
    out = reduce_chunk(vals)
    return cost, out


def mac_reduction_count(s: int, t: int) -> int:
    """Reductions performed by the multiply-and-accumulate loop."""
    return sum(mac_rounds(s, t))


def published_mac_cost(s: int, t: int, r: int) -> float:
    """Fractional estimate (sum_{i=1}^{floor(log_t s)} s/t^i + 1) * r."""
    terms, power = 0.0, t
    while power <= s:
        terms += s / power
        power *= t
    return (terms + 1) * r
