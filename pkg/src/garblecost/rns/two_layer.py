"""Two-layer RNS Montgomery multiplication.

The top layer runs Bajard-Imbert modulo a large N over top bases B, B'
and a redundant modulus P0 = p0 * p_q.  Each top residue mod P_i is a
bottom-layer value over (p0, b, b'), so every top-level modular product
becomes a bottom Montgomery multiplication with n = P_i.  The top
residue mod P0 is carried as the pair of wires (mod p0, mod p_q).

Bottom Montgomery products introduce a factor m^{-1}; the public
constants below absorb it:

    A_i      = -N^{-1} C_i^{-1} m^2    mod P_i   (P_i in B)
    E_j      = C'_j^{-1} m             mod P_j   (P_j in B')
    fwd_j    = (M^{-1} m, N P_1^{-1}, ..., N P_K^{-1})        mod P_j
    back_i   = (-M', C'_1, ..., C'_K)                          mod P_i
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from math import gcd, prod

import numpy as np
from sympy import prevprime

from ..circuit import Circuit
from ..errors import BoundExceeded, Infeasible, ParamViolation
from ..modular import RnsBasis, crt_combine, gadget_primes, mod_inverse
from ..tables import lift_crt, scaled_residue
from .costs import (cost_bajard_imbert, mac_cost, product_cost, reduction_cost,
                    reduction_cost_formula)
from .engine import (RnsValue, assign, build_bajard_imbert_mul, build_bajard_imbert_square,
                     build_multiply_accumulate, decode, rns_constant, rns_input)
from .params import RnsParams


@dataclass(frozen=True)
class TwoLayerParams:
    k: int
    K: int
    t: int
    T: int
    b: tuple
    b_prime: tuple
    p0: int
    p_q: int
    B: tuple
    B_prime: tuple
    N: int

    def __post_init__(self):
        for name in ("b", "b_prime", "B", "B_prime"):
            object.__setattr__(self, name, tuple(int(q) for q in getattr(self, name)))
        self.validate()

    def validate(self) -> None:
        k, K, t, T, N = self.k, self.K, self.t, self.T, self.N
        if len(self.B) != K or len(self.B_prime) != K:
            raise ParamViolation(f"need K={K} top moduli on each side")
        if self.p_q not in self.b + self.b_prime:
            raise ParamViolation("p_q must be a bottom basis modulus")
        if self.P0 < K * T:
            raise ParamViolation(f"P0={self.P0} below K*T={K * T}")
        bottom = (self.p0,) + self.b + self.b_prime
        top = self.B + self.B_prime
        for i, P in enumerate(top):
            for Q in top[i + 1:]:
                if gcd(P, Q) != 1:
                    raise ParamViolation(f"top moduli {P} and {Q} share a factor")
            if any(gcd(P, q) != 1 for q in bottom):
                raise ParamViolation(f"top modulus {P} shares a factor with the bottom moduli")
            if gcd(P, N) != 1:
                raise ParamViolation(f"top modulus {P} shares a factor with N")
            if not t * t * P < min(self.m, self.m_prime):
                raise ParamViolation(f"bottom ranges too small for P={P}")
            self.bottom(P)
        if not T * T * N < min(self.M, self.M_prime):
            raise ParamViolation("top ranges too small for N")
        # omega is carried as a bottom value, so it must fit a bottom input bound
        if self.P0 > t * min(top):
            raise ParamViolation("P0 exceeds the bottom input bound")

    # -- derived quantities ----------------------------------------------

    @property
    def P0(self) -> int:
        return self.p0 * self.p_q

    @property
    def m(self) -> int:
        return prod(self.b)

    @property
    def m_prime(self) -> int:
        return prod(self.b_prime)

    @property
    def M(self) -> int:
        return prod(self.B)

    @property
    def M_prime(self) -> int:
        return prod(self.B_prime)

    @property
    def top(self) -> tuple:
        return self.B + self.B_prime

    @property
    def bottom_moduli(self) -> tuple:
        return (self.p0,) + self.b + self.b_prime

    @property
    def q_index(self) -> int:
        return self.bottom_moduli.index(self.p_q)

    def bottom(self, P: int) -> RnsParams:
        return RnsParams(self.k, self.t, self.b, self.b_prime, self.p0, P)

    @cached_property
    def bottoms(self) -> tuple:
        return tuple(self.bottom(P) for P in self.top)

    @cached_property
    def C(self) -> tuple:
        return tuple(self.M // P for P in self.B)

    @cached_property
    def C_prime(self) -> tuple:
        return tuple(self.M_prime // P for P in self.B_prime)

    @cached_property
    def A(self) -> tuple:
        m2 = self.m * self.m
        return tuple(-mod_inverse(self.N, P) * mod_inverse(Ci, P) * m2 % P
                     for P, Ci in zip(self.B, self.C))

    @cached_property
    def E(self) -> tuple:
        return tuple(mod_inverse(Cj, P) * self.m % P for P, Cj in zip(self.B_prime, self.C_prime))

    @cached_property
    def fwd(self) -> tuple:
        out = []
        for P in self.B_prime:
            row = [mod_inverse(self.M, P) * self.m % P]
            row += [self.N * mod_inverse(Pi, P) % P for Pi in self.B]
            out.append(tuple(row))
        return tuple(out)

    @cached_property
    def back(self) -> tuple:
        out = []
        for P in self.B:
            row = [(-self.M_prime) % P] + [Cj % P for Cj in self.C_prime]
            out.append(tuple(row))
        return tuple(out)

    def to_dict(self) -> dict:
        return {"k": self.k, "K": self.K, "t": self.t, "T": self.T,
                "b": list(self.b), "b_prime": list(self.b_prime), "p0": self.p0,
                "p_q": self.p_q, "B": list(self.B), "B_prime": list(self.B_prime),
                "P0": self.P0, "N": self.N}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "TwoLayerParams":
        return cls(int(d["k"]), int(d["K"]), int(d["t"]), int(d["T"]), tuple(d["b"]),
                   tuple(d["b_prime"]), int(d["p0"]), int(d["p_q"]), tuple(d["B"]),
                   tuple(d["B_prime"]), int(d["N"]))


def select_two_layer_params(N: int, k: int = 2, K: int = 2) -> TwoLayerParams:
    """Smallest bottom window that admits 2K top primes covering T^2 N.

    t = k + 2 and T = K (k + 1) + 1, since each top residue reaching the
    top reduction is a bottom pseudo-residue below (k + 1) P_i.  Top
    primes are the largest primes P with t^2 P < min(m, m').
    """
    t, T = k + 2, K * (k + 1) + 1
    cand = [q for q in gadget_primes() if N % q]
    for s in range(len(cand) - 2 * k):
        window = cand[s:s + 2 * k]
        b, bp = tuple(window[0::2]), tuple(window[1::2])
        lo = min(prod(b), prod(bp))
        used = set(window)
        p0 = next((q for q in cand if q >= k * t and q not in used), None)
        if p0 is None:
            raise Infeasible("no redundant bottom modulus available")
        used.add(p0)
        p_q = next((q for q in sorted(window) if p0 * q >= K * T), None)
        if p_q is None:
            continue
        lim = (lo - 1) // (t * t)
        tops = []
        P = lim + 1
        while len(tops) < 2 * K and P > 2:
            P = prevprime(P)
            if P not in used and N % P:
                tops.append(int(P))
        if len(tops) < 2 * K:
            continue
        B, Bp = tuple(tops[0::2]), tuple(tops[1::2])
        if not T * T * N < min(prod(B), prod(Bp)):
            continue
        if p0 * p_q > t * min(tops):
            continue
        return TwoLayerParams(k, K, t, T, b, bp, p0, p_q, B, Bp, N)
    raise Infeasible(f"no two-layer parameters for N={N}, k={k}, K={K}")


@dataclass(frozen=True)
class TopValue:
    """Top-layer value: one bottom value per top modulus plus the P0 pair."""

    residues: tuple
    pair: tuple
    bound: int


def top_input(c: Circuit, tp: TwoLayerParams, bound: int | None = None) -> TopValue:
    res = tuple(rns_input(c, bp, tp.t * bp.n) for bp in tp.bottoms)
    pair = (c.input(tp.p0), c.input(tp.p_q))
    return TopValue(res, pair, tp.T * tp.N if bound is None else bound)


def assign_top(v: TopValue, tp: TwoLayerParams, x) -> dict:
    out = {}
    xs = int(x) if isinstance(x, (int, np.integer)) else [int(e) for e in x]
    for r, P in zip(v.residues, tp.top):
        out.update(assign(r, [e % P for e in xs] if isinstance(xs, list) else xs % P))
    for w, q in zip(v.pair, (tp.p0, tp.p_q)):
        out[w] = np.array([e % q for e in xs]) if isinstance(xs, list) else xs % q
    return out


def decode_top(vals, v: TopValue, tp: TwoLayerParams) -> dict:
    """Integers held by a top value: per-modulus residues and the CRT over B'."""
    basis = RnsBasis(tp.bottom_moduli)
    raw = [decode(vals, r, basis) for r in v.residues]
    scalar = not isinstance(raw[0], list)
    rows = [raw] if scalar else [list(col) for col in zip(*raw)]
    pair_cols = [vals[w] for w in v.pair]
    out = []
    right = RnsBasis(tp.B_prime)
    for i, row in enumerate(rows):
        res = [e % P for e, P in zip(row, tp.top)]
        zeta = crt_combine(res[tp.K:], right)
        pair = tuple(int(np.atleast_1d(col)[i if np.ndim(col) else 0]) for col in pair_cols)
        out.append({"zeta": zeta, "pseudo": row, "residues": res, "pair": pair})
    return out[0] if scalar else out


def build_two_layer_mul(c: Circuit, x: TopValue, y: TopValue, tp: TwoLayerParams,
                        square: bool = False) -> TopValue:
    """zeta = x y M^{-1} mod N with zeta < T N."""
    K = tp.K
    bots = tp.bottoms
    qi = tp.q_index
    pair_pos = (0, qi)
    pair_mods = (tp.p0, tp.p_q)

    if square:
        theta = [build_bajard_imbert_square(c, xr, bp) for xr, bp in zip(x.residues, bots)]
        theta_pair = [c.square(w) for w in x.pair]
        theta_bound = (x.bound - 1) ** 2 + 1
    else:
        theta = [build_bajard_imbert_mul(c, xr, yr, bp)
                 for xr, yr, bp in zip(x.residues, y.residues, bots)]
        theta_pair = [c.mul(a, b) for a, b in zip(x.pair, y.pair)]
        theta_bound = (x.bound - 1) * (y.bound - 1) + 1

    mu = [build_bajard_imbert_mul(c, theta[i], rns_constant(c, tp.A[i], bots[i]), bots[i])
          for i in range(K)]

    # zeta mod P0 from the exact bottom integers mu_i read mod p0 and mod p_q
    zeta_pair = []
    for pos, q, th in zip(pair_pos, pair_mods, theta_pair):
        mu_q = c.add([c.scale(mu[i].wires[pos], tp.C[i]) for i in range(K)])
        z = c.add(th, c.scale(mu_q, tp.N))
        zeta_pair.append(c.scale(z, mod_inverse(tp.M % q, q)))
    mu_max = sum((mu[i].bound - 1) * tp.C[i] for i in range(K))
    zeta_bound = (theta_bound - 1 + tp.N * mu_max) // tp.M + 1
    if zeta_bound > tp.T * tp.N:
        raise BoundExceeded(f"top bound {zeta_bound} exceeds T N")

    zeta_right = [build_multiply_accumulate(c, tp.fwd[j], [theta[K + j]] + mu, bots[K + j])
                  for j in range(K)]

    eta = [build_bajard_imbert_mul(c, zeta_right[j], rns_constant(c, tp.E[j], bots[K + j]),
                                   bots[K + j]) for j in range(K)]

    omega_pair = []
    for pos, q, z in zip(pair_pos, pair_mods, zeta_pair):
        terms = [c.scale(z, -mod_inverse(tp.M_prime % q, q))]
        terms += [c.scale(eta[j].wires[pos], mod_inverse(tp.B_prime[j], q)) for j in range(K)]
        omega_pair.append(c.add(terms))
    omega_max = sum((eta[j].bound - 1) * tp.C_prime[j] for j in range(K)) // tp.M_prime
    if omega_max >= tp.P0:
        raise BoundExceeded("base-extension offset does not fit P0")

    # lift the pair into Z_P0, then spread to the remaining bottom moduli
    P0 = tp.P0
    e0 = tp.p_q * mod_inverse(tp.p_q, tp.p0)
    eq = tp.p0 * mod_inverse(tp.p0, tp.p_q)
    whole = c.add(c.project(omega_pair[0], P0, lift_crt(tp.p0, e0, P0)),
                  c.project(omega_pair[1], P0, lift_crt(tp.p_q, eq, P0)))
    omega_wires = []
    for pos, r in enumerate(tp.bottom_moduli):
        if pos == 0:
            omega_wires.append(omega_pair[0])
        elif pos == qi:
            omega_wires.append(omega_pair[1])
        else:
            omega_wires.append(c.project(whole, r, scaled_residue(P0, 1, r)))
    omega = RnsValue(tuple(omega_wires), omega_max + 1, tp.bottom_moduli)

    zeta_left = [build_multiply_accumulate(c, tp.back[i], [omega] + eta, bots[i])
                 for i in range(K)]
    return TopValue(tuple(zeta_left + zeta_right), tuple(zeta_pair), zeta_bound)


def build_two_layer_square(c: Circuit, x: TopValue, tp: TwoLayerParams) -> TopValue:
    return build_two_layer_mul(c, x, x, tp, square=True)


def cost_two_layer(tp: TwoLayerParams, mode: str = "mul") -> int:
    """Exact ciphertext count of build_two_layer_mul, without building it."""
    K, k = tp.K, tp.k
    bots = tp.bottoms
    full = [True] * len(tp.bottom_moduli)
    if mode not in ("mul", "square"):
        raise ValueError(f"unknown mode {mode!r}")
    total = sum(cost_bajard_imbert(bp, mode) for bp in bots)
    if mode == "mul":
        total += 2 * (tp.p0 - 1) + 2 * (tp.p_q - 1)
    else:
        total += (tp.p0 - 1) + (tp.p_q - 1)

    def const_reduce(bp, mask, const):
        _, pm = product_cost(bp, mask, const=const)
        return reduction_cost(bp, pm)

    mu_masks = []
    for i in range(K):
        cost, out = const_reduce(bots[i], full, tp.A[i])
        total += cost
        mu_masks.append(out)
    eta_masks = []
    for j in range(K):
        cost, zmask = mac_cost(bots[K + j], tp.fwd[j], [full] + mu_masks)
        total += cost
        cost, out = const_reduce(bots[K + j], zmask, tp.E[j])
        total += cost
        eta_masks.append(out)
    total += (tp.p0 - 1) + (tp.p_q - 1) + (2 * k - 1) * (tp.P0 - 1)
    for i in range(K):
        total += mac_cost(bots[i], tp.back[i], [full] + eta_masks)[0]
    return total


def published_cost_two_layer(tp: TwoLayerParams, mode: str = "mul") -> float:
    """Literal published estimate for the two-layer total.

    2(p0+p_q) - 4 + 2K sum(2p_i-2) + (2k+1)(P0-1)
        + K (3 + 2 (sum_{i=1}^{ceil(log_t(K+1))} (K+1)/t^i + 1)) R
    """
    K, k, t = tp.K, tp.k, tp.t
    bp = tp.bottoms[0]
    R = reduction_cost_formula(bp)
    sigma = sum(q - 1 for q in tp.bottom_moduli)
    e, power = 0, 1
    while power < K + 1:
        power *= t
        e += 1
    mac = sum((K + 1) / t ** i for i in range(1, e + 1)) + 1
    if mode == "mul":
        head = 2 * (tp.p0 + tp.p_q) - 4 + 2 * K * 2 * sigma
    else:
        head = (tp.p0 + tp.p_q) - 2 + 2 * K * sigma
    return head + (2 * k + 1) * (tp.P0 - 1) + K * (3 + 2 * mac) * R
