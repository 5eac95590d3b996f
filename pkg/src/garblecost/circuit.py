"""Mixed-modulus circuit DAG with ciphertext cost accounting.

Wires carry residues in Z_m.  A wire is either private (known only at
evaluation time) or a public constant.  Any gate whose inputs are all
public is folded at build time: no gate is emitted and the result is a
public wire.

Gate costs, in ciphertexts:

    Add          0
    ScalarMul    0          (scalar coprime to the modulus)
    Projection   m - 1      (source modulus m)
    PrivateMul   2(p - 1)   (prime modulus p, both inputs private)
    UnarySquare  p - 1      (prime modulus p)
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np

from .errors import (ModulusMismatch, NotCoprime, NotPrime, PublicOperand,
                     ResidueOutOfRange, UnassignedInput)
from .modular import is_prime

PRIVATE = "private"
PUBLIC = "public"

ADD = "Add"
SCALAR_MUL = "ScalarMul"
PROJECTION = "Projection"
PRIVATE_MUL = "PrivateMul"
UNARY_SQUARE = "UnarySquare"

# Above this modulus a product of two residues may overflow int64.
_INT64_SAFE = 3037000499


@lru_cache(maxsize=4096)
def _prime(m: int) -> bool:
    return is_prime(m)


@dataclass(slots=True)
class Wire:
    id: int
    modulus: int
    visibility: str
    value: int | None = None

    @property
    def public(self) -> bool:
        return self.visibility == PUBLIC


@dataclass(slots=True)
class Gate:
    kind: str
    inputs: tuple
    output: int
    cost: int
    table: np.ndarray | None = None
    scalar: int | None = None


class Circuit:
    def __init__(self):
        self.wires: list[Wire] = []
        self.gates: list[Gate] = []
        self.inputs: list[int] = []
        self.outputs: list[int] = []
        self._cost = 0
        self._consts: dict[tuple[int, int], int] = {}

    # -- wires ------------------------------------------------------------

    def _new_wire(self, modulus, visibility, value=None) -> int:
        if modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {modulus}")
        wid = len(self.wires)
        self.wires.append(Wire(wid, int(modulus), visibility, value))
        return wid

    def input(self, modulus: int) -> int:
        """New private input wire."""
        wid = self._new_wire(modulus, PRIVATE)
        self.inputs.append(wid)
        return wid

    def const(self, value: int, modulus: int) -> int:
        """Public constant wire; identical constants share one wire."""
        value = int(value) % modulus
        key = (int(modulus), value)
        wid = self._consts.get(key)
        if wid is None:
            wid = self._new_wire(modulus, PUBLIC, value)
            self._consts[key] = wid
        return wid

    def modulus(self, w: int) -> int:
        return self.wires[w].modulus

    def is_public(self, w: int) -> bool:
        return self.wires[w].visibility == PUBLIC

    def value(self, w: int) -> int:
        """Value of a public wire."""
        wire = self.wires[w]
        if wire.visibility != PUBLIC:
            raise PublicOperand(f"wire {w} is private")
        return wire.value

    def mark_outputs(self, wires) -> None:
        self.outputs.extend(int(w) for w in wires)

    # -- gates ------------------------------------------------------------

    def _emit(self, kind, inputs, modulus, cost, table=None, scalar=None) -> int:
        out = self._new_wire(modulus, PRIVATE)
        self.gates.append(Gate(kind, tuple(inputs), out, int(cost), table, scalar))
        self._cost += int(cost)
        return out

    def add(self, *wires) -> int:
        """Free modular sum.  A single wire is returned unchanged."""
        if len(wires) == 1 and isinstance(wires[0], (list, tuple)):
            wires = tuple(wires[0])
        if not wires:
            raise ValueError("add needs at least one input")
        m = self.modulus(wires[0])
        for w in wires:
            if self.modulus(w) != m:
                raise ModulusMismatch(f"add over Z_{m} got wire mod {self.modulus(w)}")
        private = [w for w in wires if not self.is_public(w)]
        const = sum(self.wires[w].value for w in wires if self.is_public(w)) % m
        if not private:
            return self.const(const, m)
        if len(private) == 1 and const == 0:
            return private[0]
        ins = private + ([self.const(const, m)] if const else [])
        return self._emit(ADD, ins, m, 0)

    def scalar_mul(self, x: int, k: int) -> int:
        """Free multiplication by a public constant coprime to the modulus."""
        m = self.modulus(x)
        k %= m
        if gcd(k, m) != 1:
            raise NotCoprime(f"scalar {k} not coprime to {m}")
        if self.is_public(x):
            return self.const(self.value(x) * k, m)
        if k == 1:
            return x
        return self._emit(SCALAR_MUL, [x], m, 0, scalar=k)

    def scale(self, x: int, k: int) -> int:
        """Multiply by a constant; a zero constant yields a public zero."""
        m = self.modulus(x)
        if k % m == 0:
            return self.const(0, m)
        return self.scalar_mul(x, k)

    def project(self, x: int, target: int, table) -> int:
        """Apply an explicit map Z_m -> Z_target; costs m-1 on a private wire."""
        m = self.modulus(x)
        table = np.asarray(table, dtype=np.int64)
        if table.shape != (m,):
            raise ValueError(f"projection table needs {m} entries, got {table.shape}")
        if m and (table.min() < 0 or table.max() >= target):
            raise ValueError(f"projection table leaves Z_{target}")
        if self.is_public(x):
            return self.const(int(table[self.value(x)]), target)
        return self._emit(PROJECTION, [x], target, m - 1, table=table)

    def project_fn(self, x: int, target: int, f) -> int:
        """Projection whose table is f evaluated on every residue."""
        m = self.modulus(x)
        if self.is_public(x):
            return self.const(int(f(self.value(x))) % target, target)
        return self.project(x, target, [f(v) for v in range(m)])

    def private_mul(self, x: int, y: int) -> int:
        p = self.modulus(x)
        if self.modulus(y) != p:
            raise ModulusMismatch(f"mul of Z_{p} and Z_{self.modulus(y)}")
        if self.is_public(x) or self.is_public(y):
            raise PublicOperand("private_mul needs two private operands")
        if not _prime(p):
            raise NotPrime(f"private multiplication needs a prime modulus, got {p}")
        return self._emit(PRIVATE_MUL, [x, y], p, 2 * (p - 1))

    def mul(self, x: int, y: int) -> int:
        """Product, routed through the free scalar path when an operand is public."""
        if self.modulus(x) != self.modulus(y):
            raise ModulusMismatch("mul across moduli")
        if self.is_public(y):
            return self.scale(x, self.value(y))
        if self.is_public(x):
            return self.scale(y, self.value(x))
        return self.private_mul(x, y)

    def square(self, x: int) -> int:
        p = self.modulus(x)
        if not _prime(p):
            raise NotPrime(f"squaring gadget needs a prime modulus, got {p}")
        if self.is_public(x):
            return self.const(self.value(x) ** 2, p)
        return self._emit(UNARY_SQUARE, [x], p, p - 1)

    # -- accounting -------------------------------------------------------

    @property
    def total_cost(self) -> int:
        return self._cost

    def recompute_cost(self) -> int:
        return sum(g.cost for g in self.gates)

    # -- evaluation -------------------------------------------------------

    def run(self, assignment: dict) -> list:
        """Evaluate every wire.  Values may be ints or equal-length arrays."""
        vals: list = [None] * len(self.wires)
        for w in self.wires:
            if w.visibility == PUBLIC:
                vals[w.id] = w.value
        for w in self.inputs:
            if w not in assignment:
                raise UnassignedInput(f"input wire {w} unassigned")
            v = np.asarray(assignment[w], dtype=np.int64)
            m = self.wires[w].modulus
            if v.size and (v.min() < 0 or v.max() >= m):
                raise ResidueOutOfRange(f"input wire {w} outside Z_{m}")
            vals[w] = v
        for g in self.gates:
            m = self.wires[g.output].modulus
            if g.kind == ADD:
                acc = vals[g.inputs[0]]
                for i in g.inputs[1:]:
                    acc = acc + vals[i]
                vals[g.output] = acc % m
            elif g.kind == SCALAR_MUL:
                vals[g.output] = _mulmod(vals[g.inputs[0]], g.scalar, m)
            elif g.kind == PROJECTION:
                vals[g.output] = g.table[vals[g.inputs[0]]]
            elif g.kind == PRIVATE_MUL:
                vals[g.output] = vals[g.inputs[0]] * vals[g.inputs[1]] % m
            elif g.kind == UNARY_SQUARE:
                x = vals[g.inputs[0]]
                vals[g.output] = x * x % m
            else:
                raise ValueError(f"unknown gate kind {g.kind}")
        return vals

    def evaluate(self, assignment: dict) -> list:
        """Values of the output wires, as ints when every input is scalar."""
        scalar = all(np.ndim(v) == 0 for v in assignment.values())
        vals = self.run(assignment)
        out = [vals[w] for w in self.outputs]
        if scalar:
            return [int(v) for v in out]
        return out

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        wires = []
        for w in self.wires:
            d = {"id": w.id, "modulus": w.modulus, "visibility": w.visibility}
            if w.visibility == PUBLIC:
                d["value"] = w.value
            wires.append(d)
        gates = []
        for g in self.gates:
            d = {"kind": g.kind, "inputs": list(g.inputs), "output": g.output, "cost": g.cost}
            if g.table is not None:
                d["table"] = g.table.tolist()
            if g.scalar is not None:
                d["scalar"] = g.scalar
            gates.append(d)
        return {"wires": wires, "gates": gates,
                "inputs": list(self.inputs), "outputs": list(self.outputs)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> "Circuit":
        c = cls()
        for w in d["wires"]:
            c.wires.append(Wire(w["id"], w["modulus"], w["visibility"], w.get("value")))
            if w["visibility"] == PUBLIC:
                c._consts.setdefault((w["modulus"], w["value"]), w["id"])
        for g in d["gates"]:
            table = np.asarray(g["table"], dtype=np.int64) if "table" in g else None
            c.gates.append(Gate(g["kind"], tuple(g["inputs"]), g["output"], g["cost"],
                                table, g.get("scalar")))
            c._cost += g["cost"]
        c.inputs = list(d["inputs"])
        c.outputs = list(d["outputs"])
        return c


def _mulmod(x, k, m):
    if m <= _INT64_SAFE and k <= _INT64_SAFE:
        return x * k % m
    if np.ndim(x) == 0:
        return int(x) * k % m
    return (x.astype(object) * k % m).astype(np.int64)
