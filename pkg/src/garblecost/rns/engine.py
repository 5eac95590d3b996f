"""Circuit builders for Montgomery multiplication in a double RNS.

A value is held as one private wire per modulus of ``params.moduli``
and carries an exclusive upper bound on the integer it represents.
The reduction maps theta to zeta = theta m^{-1} mod n with zeta < t n,
extending mu from the left basis into b* and then zeta back from the
right basis, with p0 pinning the base-extension offset.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..circuit import Circuit
from ..errors import BasisMismatch, BoundExceeded, EmptyInput, OutOfRange
from ..modular import crt_combine, mod_inverse
from ..tables import scaled_residue
from .params import RnsParams


@dataclass(frozen=True)
class RnsValue:
    wires: tuple
    bound: int
    moduli: tuple

    def __len__(self):
        return len(self.wires)


def rns_input(c: Circuit, params: RnsParams, bound: int | None = None) -> RnsValue:
    """Fresh private value over all of ``params.moduli``; default bound t n."""
    if bound is None:
        bound = params.t * params.n
    wires = tuple(c.input(q) for q in params.moduli)
    return RnsValue(wires, int(bound), params.moduli)


def rns_constant(c: Circuit, value: int, params: RnsParams) -> RnsValue:
    moduli = params.moduli
    if value < 0:
        raise OutOfRange("constants must be non-negative")
    return RnsValue(tuple(c.const(value % q, q) for q in moduli), int(value) + 1, moduli)


def assign(v: RnsValue, x) -> dict:
    """Input assignment placing integer(s) x on the wires of v."""
    if isinstance(x, (int, np.integer)):
        x = int(x)
        return {w: x % q for w, q in zip(v.wires, v.moduli)}
    xs = [int(e) for e in x]
    return {w: np.array([e % q for e in xs], dtype=np.int64)
            for w, q in zip(v.wires, v.moduli)}


def decode(vals, v: RnsValue, basis=None):
    """Integer(s) represented by v after ``Circuit.run``."""
    from ..modular import RnsBasis
    basis = basis or RnsBasis(v.moduli)
    cols = [vals[w] for w in v.wires]
    if all(np.ndim(col) == 0 for col in cols):
        return crt_combine([int(col) for col in cols], basis)
    size = max(np.size(col) for col in cols)
    cols = [np.broadcast_to(col, (size,)) for col in cols]
    return [crt_combine([int(col[i]) for col in cols], basis) for i in range(size)]


def _check_same(*vs):
    base = vs[0].moduli
    for v in vs[1:]:
        if v.moduli != base:
            raise BasisMismatch("values live over different bases")


def _product_bound(a: int, b: int) -> int:
    return (a - 1) * (b - 1) + 1


def build_rns_private_mul(c: Circuit, x: RnsValue, y: RnsValue) -> RnsValue:
    """Componentwise product; free wherever one side is public."""
    _check_same(x, y)
    wires = tuple(c.mul(a, b) for a, b in zip(x.wires, y.wires))
    return RnsValue(wires, _product_bound(x.bound, y.bound), x.moduli)


def build_rns_square(c: Circuit, x: RnsValue) -> RnsValue:
    wires = tuple(c.square(a) for a in x.wires)
    return RnsValue(wires, _product_bound(x.bound, x.bound), x.moduli)


def reduce_bound(theta_bound: int, params: RnsParams) -> int:
    """Exclusive bound on zeta = (theta + n mu) / m."""
    m = params.m
    mu_max = sum((q - 1) * (m // q) for q in params.b)
    return (theta_bound - 1 + params.n * mu_max) // m + 1


def build_montgomery_reduce(c: Circuit, theta: RnsValue, params: RnsParams) -> RnsValue:
    """zeta = theta m^{-1} mod n, returned as a pseudo-residue below t n."""
    mods = params.moduli
    if theta.moduli != mods:
        raise BasisMismatch("theta is not over the parameter moduli")
    zeta_bound = reduce_bound(theta.bound, params)
    if zeta_bound > params.t * params.n:
        raise BoundExceeded(f"theta bound {theta.bound} too large for this reduction")
    n, m, mp = params.n, params.m, params.m_prime
    tw = theta.wires

    # mu_i = theta_i c_i^{-1} (-n^{-1}) mod p_i, then spread mu = sum mu_i c_i over b*
    spread = {pos: [] for pos in params.star}
    for idx, pos in enumerate(params.left):
        q = mods[pos]
        mu_i = c.scale(tw[pos], params.c_inv[idx] * (-mod_inverse(n, q)))
        ci = m // q
        for r_pos in params.star:
            r = mods[r_pos]
            spread[r_pos].append(c.project(mu_i, r, scaled_residue(q, ci % r, r)))

    out = list(tw)
    for r_pos in params.star:
        r = mods[r_pos]
        mu_r = c.add(spread[r_pos])
        z = c.add(tw[r_pos], c.scale(mu_r, n))
        out[r_pos] = c.scale(z, mod_inverse(m % r, r))

    # base extension b' -> b: zeta = sum eta_j c'_j - omega m'
    p0 = params.p0
    into_p0 = []
    into_left = {pos: [] for pos in params.left}
    for idx, pos in enumerate(params.right):
        q = mods[pos]
        eta = c.scale(out[pos], params.c_prime_inv[idx])
        into_p0.append(c.project(eta, p0, scaled_residue(q, mod_inverse(q, p0), p0)))
        cj = mp // q
        for l_pos in params.left:
            r = mods[l_pos]
            into_left[l_pos].append(c.project(eta, r, scaled_residue(q, cj % r, r)))
    omega = c.add([c.scale(out[0], -mod_inverse(mp % p0, p0))] + into_p0)
    for l_pos in params.left:
        r = mods[l_pos]
        into_left[l_pos].append(c.project(omega, r, scaled_residue(p0, (-mp) % r, r)))
        out[l_pos] = c.add(into_left[l_pos])
    return RnsValue(tuple(out), zeta_bound, mods)


def build_bajard_imbert_mul(c: Circuit, x: RnsValue, y: RnsValue, params: RnsParams) -> RnsValue:
    """zeta = x y m^{-1} mod n.  Either operand may be a public constant."""
    return build_montgomery_reduce(c, build_rns_private_mul(c, x, y), params)


def build_bajard_imbert_square(c: Circuit, x: RnsValue, params: RnsParams) -> RnsValue:
    return build_montgomery_reduce(c, build_rns_square(c, x), params)


def mac_rounds(s: int, t: int) -> list[int]:
    """Number of reductions performed in each round for s inputs."""
    rounds = []
    while s > t:
        s = -(-s // t)
        rounds.append(s)
    return rounds + [1]


def build_multiply_accumulate(c: Circuit, d, w, params: RnsParams) -> RnsValue:
    """zeta = sum d_i w_i mod n as a pseudo-residue below t n.

    The constants are pre-multiplied by m^R, where R is the number of
    reductions each term passes through, so the result carries no
    leftover Montgomery factor.
    """
    d, w = list(d), list(w)
    if not d or len(d) != len(w):
        raise EmptyInput("need equally many constants and values, at least one")
    _check_same(*w)
    t, n = params.t, params.n
    depth = len(mac_rounds(len(w), t))
    lift = pow(params.m, depth, n)
    vals = [build_rns_private_mul(c, wi, rns_constant(c, di * lift % n, params))
            for di, wi in zip(d, w)]
    while len(vals) > t:
        vals = [build_montgomery_reduce(c, _sum(c, vals[i:i + t]), params)
                for i in range(0, len(vals), t)]
    return build_montgomery_reduce(c, _sum(c, vals), params)


def _sum(c: Circuit, vals):
    if len(vals) == 1:
        return vals[0]
    wires = tuple(c.add([v.wires[i] for v in vals]) for i in range(len(vals[0].wires)))
    return RnsValue(wires, sum(v.bound - 1 for v in vals) + 1, vals[0].moduli)
