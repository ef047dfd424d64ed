"""Exhaustive listing and uniform sampling of NCFs through their layer structures.

Each n-variable NCF corresponds to exactly one structure: an admissible
composition, an ordered split of the variables into layers of those sizes,
one sign per variable and the outer constant. Enumeration walks that product;
sampling draws from it with the right weights.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product
from math import comb
from typing import Iterator, Sequence

import numpy as np

from .canalyze import ExtendedMonomial, LayerStructure
from .formulas import Composition, admissible_parts

RNG_ALGORITHM = "Philox4x64-10 (numpy.random.Philox)"


def compositions(n: int) -> Iterator[Composition]:
    """Compositions of n with last part >= 2, by number of parts then lexicographically."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    for r in range(1, n):
        yield from compositions_with_parts(n, r)


def compositions_with_parts(n: int, r: int) -> Iterator[Composition]:
    for parts in admissible_parts(n, r):
        yield Composition(n, parts)


def _colex(pool: Sequence[int], k: int) -> list[tuple[int, ...]]:
    return sorted(combinations(pool, k), key=lambda c: c[::-1])


def _ordered_partitions(pool: tuple[int, ...], parts: Sequence[int]) -> Iterator[list[tuple[int, ...]]]:
    if not parts:
        yield []
        return
    for block in _colex(pool, parts[0]):
        rest = tuple(v for v in pool if v not in block)
        for tail in _ordered_partitions(rest, parts[1:]):
            yield [block] + tail


def _structures_for(c: Composition) -> Iterator[LayerStructure]:
    n = c.n
    for blocks in _ordered_partitions(tuple(range(1, n + 1)), c.parts):
        order = [v for block in blocks for v in block]
        for signs in product((0, 1), repeat=n):
            # signs[j] belongs to order[j]; the first variable is the low counter bit
            sign_of = dict(zip(order, signs[::-1]))
            layers = tuple(ExtendedMonomial(tuple((v, sign_of[v]) for v in block)) for block in blocks)
            for b in (0, 1):
                yield LayerStructure(n, layers, b)


def enumerate_ncf(n: int, r: int | None = None) -> Iterator[LayerStructure]:
    """Every valid layer structure on n variables (optionally with r layers), once each."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if r is not None and not 1 <= r <= n - 1:
        raise ValueError(f"need 1 <= r <= {n - 1}, got r={r}")
    comps = compositions(n) if r is None else compositions_with_parts(n, r)
    for c in comps:
        yield from _structures_for(c)


@lru_cache(maxsize=None)
def _suffix_weight(m: int) -> int:
    # sum of multinomials over admissible compositions of m
    if m < 2:
        return 0
    return 1 + sum(comb(m, k) * _suffix_weight(m - k) for k in range(1, m - 1))


def structure_count(n: int) -> int:
    """Number of layer structures on n variables (= number of NCFs)."""
    return 2 ** (n + 1) * _suffix_weight(n)


def _randbelow(rng: np.random.Generator, bound: int) -> int:
    # exact uniform integer in [0, bound) for arbitrarily large bound
    bits = bound.bit_length()
    words = -(-bits // 64)
    while True:
        value = 0
        for w in rng.integers(0, 1 << 64, size=words, dtype=np.uint64, endpoint=False):
            value = (value << 64) | int(w)
        value >>= words * 64 - bits
        if value < bound:
            return value


def _draw_parts(rng: np.random.Generator, n: int) -> tuple[int, ...]:
    parts = []
    m = n
    while True:
        ticket = _randbelow(rng, _suffix_weight(m))
        if ticket == 0:
            parts.append(m)
            return tuple(parts)
        ticket -= 1
        for k in range(1, m - 1):
            block = comb(m, k) * _suffix_weight(m - k)
            if ticket < block:
                parts.append(k)
                m -= k
                break
            ticket -= block


def sample_ncfs(n: int, count: int, seed: int) -> Iterator[LayerStructure]:
    """``count`` independent uniform NCFs on n variables from one seeded stream."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    rng = np.random.Generator(np.random.Philox(seed))
    for _ in range(count):
        parts = _draw_parts(rng, n)
        perm = [int(v) + 1 for v in rng.permutation(n)]
        signs = rng.integers(0, 2, size=n)
        layers = []
        pos = 0
        for k in parts:
            layers.append(ExtendedMonomial(tuple((perm[pos + j], int(signs[pos + j])) for j in range(k))))
            pos += k
        yield LayerStructure(n, tuple(layers), int(rng.integers(0, 2)))


def sample_ncf(n: int, seed: int) -> LayerStructure:
    return next(sample_ncfs(n, 1, seed))
