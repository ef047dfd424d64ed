"""Canalyzing variables and the layered normal form of nested canalyzing functions.

An NCF on n >= 2 variables has exactly one representation

    f = M1 (M2 ( ... (M_{r-1} (M_r + 1) + 1) ... ) + 1) + b

with disjoint extended monomials ``M_l = prod (x_j + a_j)``. The decomposer
recovers it by peeling, at every depth, the full set of canalyzing variables
of the current residual.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Union

from .core import (
    TruthTable,
    anf_from_truth_table,
    cofactor_is_constant,
    essential_variables,
    lift,
    restrict_many,
    var_mask,
    _full,
)


class NCFError(ValueError):
    pass


class NoCanalyzingVariable(NCFError):
    pass


class MixedCanalyzedValues(NCFError):
    pass


@dataclass(frozen=True, order=True)
class CanalyzingTriple:
    i: int
    a: int
    b: int


@dataclass(frozen=True)
class ExtendedMonomial:
    """Product of ``(x_j + a_j)``; setting ``x_j = a_j`` zeroes it."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        factors = tuple(sorted((int(i), int(a) & 1) for i, a in self.factors))
        if not factors:
            raise ValueError("extended monomial needs at least one factor")
        idx = [i for i, _ in factors]
        if len(set(idx)) != len(idx):
            raise ValueError(f"repeated variable in monomial: {idx}")
        if idx[0] < 1:
            raise ValueError("variable indices start at 1")
        object.__setattr__(self, "factors", factors)

    @property
    def variables(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def table(self, n: int) -> TruthTable:
        bits = _full(n)
        for i, a in self.factors:
            lit = var_mask(n, i)
            bits &= lit if a == 0 else lit ^ _full(n)
        return TruthTable(n, bits)

    def relabel(self, names) -> "ExtendedMonomial":
        return ExtendedMonomial(tuple((names[i - 1], a) for i, a in self.factors))

    def text(self) -> str:
        return "".join(f"(x{i}{chr(39) if a else ''})" for i, a in self.factors)


@dataclass(frozen=True)
class LayerStructure:
    n: int
    layers: tuple[ExtendedMonomial, ...]
    b: int
    degenerate: bool = False

    def __post_init__(self):
        layers = tuple(m if isinstance(m, ExtendedMonomial) else ExtendedMonomial(tuple(m)) for m in self.layers)
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "b", int(self.b) & 1)
        if not layers:
            raise ValueError("at least one layer required")
        seen: list[int] = [v for m in layers for v in m.variables]
        if len(seen) != len(set(seen)):
            raise ValueError("layers overlap")
        if sorted(seen) != list(range(1, self.n + 1)):
            raise ValueError(f"layers must cover x1..x{self.n} exactly")
        if self.n >= 2 and len(layers[-1]) < 2:
            raise ValueError("last layer must have at least two variables when n >= 2")
        if self.degenerate != (self.n == 1):
            raise ValueError("the degenerate flag marks exactly the n = 1 structures")

    @property
    def composition(self) -> tuple[int, ...]:
        return tuple(len(m) for m in self.layers)

    def layer_of(self, i: int) -> int:
        for l, m in enumerate(self.layers, start=1):
            if i in m.variables:
                return l
        raise IndexError(i)

    def to_text(self) -> str:
        inner = ""
        for m in reversed(self.layers[1:]):
            inner = f" [ {m.text()}{inner} ]"
        return f"{self.b} ⊕ {self.layers[0].text()}{inner}"

    def to_json(self) -> dict:
        obj = {"n": self.n, "b": self.b, "layers": [[list(f) for f in m.factors] for m in self.layers]}
        if self.degenerate:
            obj["degenerate"] = True
        return obj

    @classmethod
    def from_json(cls, obj: Union[dict, str]) -> "LayerStructure":
        if isinstance(obj, str):
            obj = json.loads(obj)
        layers = tuple(ExtendedMonomial(tuple(tuple(f) for f in m)) for m in obj["layers"])
        return cls(int(obj["n"]), layers, int(obj["b"]), bool(obj.get("degenerate", False)))

    @classmethod
    def from_text(cls, text: str, n: int | None = None) -> "LayerStructure":
        m = re.match(r"^\s*([01])\s*(?:⊕|\+|\^)\s*(.*?)\s*$", text, re.S)
        if not m:
            raise ValueError(f"bad structure text: {text!r}")
        b, rest = int(m.group(1)), m.group(2)
        layers = []
        depth = 0
        while True:
            fm = re.match(r"((?:\s*\(\s*x\d+\s*'?\s*\))+)\s*", rest)
            if not fm:
                raise ValueError(f"expected a layer at: {rest!r}")
            factors = tuple((int(i), 1 if p else 0) for i, p in re.findall(r"x(\d+)\s*('?)", fm.group(1)))
            layers.append(ExtendedMonomial(factors))
            rest = rest[fm.end():]
            if rest.startswith("["):
                depth += 1
                rest = rest[1:].lstrip()
                continue
            break
        if rest.replace(" ", "") != "]" * depth:
            raise ValueError(f"unbalanced brackets in structure text: {text!r}")
        total = sum(len(x) for x in layers)
        return cls(total if n is None else n, tuple(layers), b, (total if n is None else n) == 1)


# --- reasons a function is not nested canalyzing --------------------------

@dataclass(frozen=True)
class ConstantFunction:
    value: int


@dataclass(frozen=True)
class InessentialVariable:
    i: int


@dataclass(frozen=True)
class NoCanalyzingVariableAtDepth:
    depth: int
    residual: TruthTable
    variables: tuple[int, ...]

    def summary(self) -> str:
        anf = anf_from_truth_table(self.residual)
        text = " + ".join(
            "*".join(f"x{self.variables[i - 1]}" for i in mono) if mono else "1"
            for mono in anf.sorted_monomials()
        ) or "0"
        return text


@dataclass(frozen=True)
class TooFewVariables:
    n: int


NotNCFReason = Union[ConstantFunction, InessentialVariable, NoCanalyzingVariableAtDepth, TooFewVariables]


@dataclass(frozen=True)
class NCF:
    structure: LayerStructure

    @property
    def is_ncf(self) -> bool:
        return True


@dataclass(frozen=True)
class NotNCF:
    reason: NotNCFReason

    @property
    def is_ncf(self) -> bool:
        return False


DecomposeVerdict = Union[NCF, NotNCF]


@dataclass(frozen=True)
class Peel:
    """One layer split off ``f = M * Q + c``; Q lives on ``residual_vars``."""

    monomial: ExtendedMonomial
    value: int
    residual: TruthTable
    residual_vars: tuple[int, ...] = field(default=())


# --- operations -----------------------------------------------------------

def canalyzing_triples(f: TruthTable) -> list[CanalyzingTriple]:
    out = []
    for i in range(1, f.n + 1):
        for a in (0, 1):
            b = cofactor_is_constant(f, i, a)
            if b is not None:
                out.append(CanalyzingTriple(i, a, b))
    return out


def factor_layer(f: TruthTable) -> Peel:
    """Split off every canalyzing variable of ``f`` as one extended monomial.

    Raises NoCanalyzingVariable when ``f`` has none, and
    MixedCanalyzedValues when the canalyzed outputs disagree (only possible
    when ``f`` depends on fewer than two variables).
    """
    if f.is_constant():
        raise NCFError("factor_layer needs a nonconstant function")
    triples = canalyzing_triples(f)
    if not triples:
        raise NoCanalyzingVariable("no canalyzing variable")
    values = {t.b for t in triples}
    if len(values) > 1 or len({t.i for t in triples}) != len(triples):
        raise MixedCanalyzedValues(f"canalyzed values disagree: {triples}")
    c = values.pop()
    monomial = ExtendedMonomial(tuple((t.i, t.a) for t in triples))
    q, kept = restrict_many(f, {t.i: t.a ^ 1 for t in triples})
    q = q ^ c
    # f == M * Q + c, with Q lifted back to f's variables
    lifted = lift(q, f.n, kept).bits
    if ((monomial.table(f.n).bits & lifted) ^ (_full(f.n) if c else 0)) != f.bits:
        raise NCFError("layer factorization failed to reproduce f")
    return Peel(monomial, c, q, kept)


def ncf_decompose(f: TruthTable) -> DecomposeVerdict:
    if f.is_constant():
        return NotNCF(ConstantFunction(f.bits & 1))
    essential = essential_variables(f)
    if len(essential) < f.n:
        missing = next(i for i in range(1, f.n + 1) if i not in essential)
        return NotNCF(InessentialVariable(missing))
    if f.n == 1:
        # x1 + c: both literals canalyze; fix the sign so that a = 0
        return NCF(LayerStructure(1, (ExtendedMonomial(((1, 0),)),), f[0], degenerate=True))

    names = tuple(range(1, f.n + 1))
    current = f
    layers: list[ExtendedMonomial] = []
    b = None
    depth = 1
    while True:
        try:
            peel = factor_layer(current)
        except NoCanalyzingVariable:
            return NotNCF(NoCanalyzingVariableAtDepth(depth, current, names))
        if b is None:
            b = peel.value
        elif peel.value != 1:
            raise MixedCanalyzedValues(f"inner layer at depth {depth} canalyzes to 0")
        layers.append(peel.monomial.relabel(names))
        names = tuple(names[v - 1] for v in peel.residual_vars)
        current = peel.residual
        if current.n == 0:
            if current.bits != 1:
                raise NCFError("residual after the last layer must be the constant 1")
            break
        depth += 1

    structure = LayerStructure(f.n, tuple(layers), b)
    if reconstruct(structure) != f:
        raise NCFError("decomposition does not reconstruct f")
    return NCF(structure)


def reconstruct(s: LayerStructure) -> TruthTable:
    n = s.n
    full = _full(n)
    tables = [m.table(n).bits for m in s.layers]
    if len(tables) == 1:
        inner = tables[0]
    else:
        inner = tables[-1] ^ full
        for t in reversed(tables[1:-1]):
            inner = (t & inner) ^ full
        inner = tables[0] & inner
    return TruthTable(n, inner ^ (full if s.b else 0))


def layer_number(s: LayerStructure) -> int:
    return len(s.layers)


def most_dominant_variables(s: LayerStructure) -> set[int]:
    return set(s.layers[0].variables)
