"""Closed forms for counts, weights, activities and average sensitivities of NCFs.

Everything here is a function of the layer-size vector (composition) alone;
no truth tables are built. Counts are exact integers and sensitivities exact
dyadic rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Iterator, Sequence

import numpy as np

from .dyadic import Dyadic

SCAN_CAP = 30
PRUNED_CAP = 40


@dataclass(frozen=True)
class Composition:
    n: int
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(k) for k in self.parts)
        object.__setattr__(self, "parts", parts)
        if self.n < 2:
            raise ValueError("compositions describe NCFs on n >= 2 variables")
        if not parts or sum(parts) != self.n:
            raise ValueError(f"parts {parts} do not sum to n={self.n}")
        if any(k < 1 for k in parts):
            raise ValueError("every layer needs at least one variable")
        if parts[-1] < 2:
            raise ValueError("the last layer needs at least two variables")

    @classmethod
    def of(cls, *parts: int) -> "Composition":
        return cls(sum(parts), tuple(parts))

    @property
    def r(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


def _as_composition(c) -> Composition:
    return c if isinstance(c, Composition) else Composition.of(*c)


def _prefix_sums(parts: Sequence[int]) -> list[int]:
    sums = [0]
    for k in parts:
        sums.append(sums[-1] + k)
    return sums


def multinomial(parts: Iterable[int]) -> int:
    parts = list(parts)
    out = factorial(sum(parts))
    for k in parts:
        out //= factorial(k)
    return out


def admissible_parts(n: int, r: int | None = None) -> Iterator[tuple[int, ...]]:
    """Part tuples of n (optionally with r parts) with last part >= 2, by r then lexicographically."""
    def rec(m, slots):
        if slots == 1:
            if m >= 2:
                yield (m,)
            return
        for k in range(1, m - 1):
            for rest in rec(m - k, slots - 1):
                yield (k,) + rest

    for slots in ([r] if r is not None else range(1, n)):
        yield from rec(n, slots)


def count_ncf(n: int, r: int) -> int:
    """Number of n-variable NCFs with layer number r."""
    if n < 2 or not 1 <= r <= n - 1:
        raise ValueError(f"need n >= 2 and 1 <= r <= n-1, got n={n}, r={r}")
    return 2 ** (n + 1) * _multinomial_sum(n, r)


@lru_cache(maxsize=None)
def _multinomial_sum(m: int, r: int) -> int:
    # sum of multinomial(parts) over admissible r-part compositions of m,
    # grouped by the size k of the first part
    if r == 1:
        return 1 if m >= 2 else 0
    return sum(comb(m, k) * _multinomial_sum(m - k, r - 1) for k in range(1, m - 1))


def count_ncf_total(n: int) -> int:
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    return sum(count_ncf(n, r) for r in range(1, n))


def count_recursive(n: int) -> int:
    """The same total from the nonlinear recursion a_2 = 8,
    a_n = sum_{r=2}^{n-1} C(n, r-1) 2^(r-1) a_{n-r+1} + 2^(n+1)."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    a = {2: 8}
    for m in range(3, n + 1):
        a[m] = sum(comb(m, r - 1) * 2 ** (r - 1) * a[m - r + 1] for r in range(2, m)) + 2 ** (m + 1)
    return a[n]


def weight_from_composition(c, complemented: bool = False) -> int:
    """Hamming weight of an NCF with b = 0 (or b = 1 when complemented)."""
    c = _as_composition(c)
    sums = _prefix_sums(c.parts)
    w = sum((-1) ** (j - 1) * 2 ** (c.n - sums[j]) for j in range(1, c.r + 1))
    return 2**c.n - w if complemented else w


def _activity_numerators(c: Composition) -> list[int]:
    # a_l = 2^(n-1) A_l satisfies a_r = 1 and a_l = 2^(n - S_l) - a_(l+1)
    sums = _prefix_sums(c.parts)
    out = [1]
    for l in range(c.r - 1, 0, -1):
        out.append((1 << (c.n - sums[l])) - out[-1])
    return out[::-1]


def activity_of_layer(c, l: int) -> Dyadic:
    """Activity shared by every variable of layer l (1-based)."""
    c = _as_composition(c)
    if not 1 <= l <= c.r:
        raise IndexError(f"layer {l} out of range 1..{c.r}")
    sums = _prefix_sums(c.parts)
    num = sum((-1) ** (j - 1) * 2 ** (c.n - sums[j + l - 1]) for j in range(1, c.r - l + 2))
    return Dyadic(num, c.n - 1)


def layer_activities(c) -> list[Dyadic]:
    c = _as_composition(c)
    return [activity_of_layer(c, l) for l in range(1, c.r + 1)]


def average_sensitivity(c) -> Dyadic:
    """Sum of k_l A_l, evaluated through the integer activity recurrence."""
    c = _as_composition(c)
    return Dyadic(sum(k * a for k, a in zip(c.parts, _activity_numerators(c))), c.n - 1)


def upper_estimate(c) -> Dyadic:
    """U(k_1..k_r): the per-layer bound used to cap the average sensitivity."""
    c = _as_composition(c)
    sums = _prefix_sums(c.parts)
    num = sum(k * 2 ** (c.n - sums[l]) for l, k in enumerate(c.parts[:-1], start=1)) + c.parts[-1]
    return Dyadic(num, c.n - 1)


def sensitivity_bounds(n: int) -> tuple[Dyadic, Dyadic]:
    """(attained lower bound, strict upper bound) on s^f over n-variable NCFs."""
    if n < 3:
        raise ValueError(f"bounds are stated for n >= 3, got {n}")
    return Dyadic(n, n - 1), Dyadic(2) - Dyadic(1, n - 2)


def lemma42_composition(n: int, variant: int) -> Composition:
    if variant == 1:
        return Composition(n, (1,) * (n - 2) + (2,))
    if variant == 2:
        return Composition(n, (1,) * (n - 3) + (3,))
    if variant == 3:
        return Composition(n, (1,) + (2,) * (n // 2 - 2) + (3,))
    raise ValueError(f"variant must be 1, 2 or 3, got {variant}")


def lemma42_value(n: int, variant: int) -> Dyadic:
    """Closed-form s^f of the three near-maximal families."""
    if variant == 1:
        if n < 3:
            raise ValueError("variant 1 needs n >= 3")
        num = 3 + (-1) ** n
    elif variant == 2:
        if n < 4:
            raise ValueError("variant 2 needs n >= 4")
        num = 9 + 5 * (-1) ** (n - 1)
    elif variant == 3:
        if n < 6 or n % 2:
            raise ValueError("variant 3 needs even n >= 6")
        num = 4
    else:
        raise ValueError(f"variant must be 1, 2 or 3, got {variant}")
    # 4/3 - num/(3*2^n) = (2^(n+2) - num) / (3*2^n); the numerator is divisible by 3
    top = 2 ** (n + 2) - num
    if top % 3:
        raise ArithmeticError("closed form is not dyadic")
    return Dyadic(top // 3, n)


# --- conjecture scan ------------------------------------------------------
#
# Scores are kept as integers T = 2^(n-1) * s^f. For a composition split as
# prefix + suffix c' on the last m variables,
#     T = T_prefix + T(c') - P * W(c')
# where W(c') is the weight formula of c' and P the alternating sum of the
# prefix parts, so suffix tables can be shared across prefixes.

_VECTOR_DEPTH = 18


@lru_cache(maxsize=None)
def _suffix_tables(m: int) -> tuple[np.ndarray, np.ndarray]:
    """(T, W) for every composition of m; index 0 is (m), then (k)+rest by k."""
    ts = [np.array([m], dtype=np.int64)]
    ws = [np.array([1], dtype=np.int64)]
    for k in range(1, m - 1):
        t_rest, w_rest = _suffix_tables(m - k)
        w = (1 << (m - k)) - w_rest
        ws.append(w)
        ts.append(k * w + t_rest)
    return np.concatenate(ts), np.concatenate(ws)


def _decode_suffix(m: int, idx: int) -> tuple[int, ...]:
    if idx == 0:
        return (m,)
    idx -= 1
    for k in range(1, m - 1):
        size = 1 << (m - k - 2)
        if idx < size:
            return (k,) + _decode_suffix(m - k, idx)
        idx -= size
    raise IndexError(idx)


@dataclass
class ScanPartial:
    """Mergeable (max, argmax) over a subset of compositions of n."""

    n: int
    best: int | None = None
    argmax: list[tuple[int, ...]] = field(default_factory=list)
    visited: int = 0

    def offer(self, value: int, parts: tuple[int, ...]) -> None:
        if self.best is None or value > self.best:
            self.best, self.argmax = value, [parts]
        elif value == self.best:
            self.argmax.append(parts)

    def merge(self, other: "ScanPartial") -> "ScanPartial":
        if other.n != self.n:
            raise ValueError("cannot merge scans of different n")
        out = ScanPartial(self.n, self.best, list(self.argmax), self.visited + other.visited)
        if other.best is not None:
            if out.best is None or other.best > out.best:
                out.best, out.argmax = other.best, list(other.argmax)
            elif other.best == out.best:
                out.argmax.extend(other.argmax)
        return out


def scan_units(n: int) -> list[int]:
    """Work units of a scan: the admissible first-layer sizes."""
    return list(range(1, n - 1)) + [n]


def _exhaustive_visit(n, prefix, tp, p, m, acc: ScanPartial):
    if m <= _VECTOR_DEPTH:
        t_suf, w_suf = _suffix_tables(m)
        vals = tp + t_suf - p * w_suf
        acc.visited += len(vals)
        top = int(vals.max())
        if acc.best is not None and top < acc.best:
            return
        for idx in np.flatnonzero(vals == top):
            acc.offer(top, prefix + _decode_suffix(m, int(idx)))
        return
    acc.visited += 1
    acc.offer(tp + m - p, prefix + (m,))
    for k in range(1, m - 1):
        p2 = k - p
        _exhaustive_visit(n, prefix + (k,), tp + (1 << (m - k)) * p2, p2, m - k, acc)


@lru_cache(maxsize=None)
def _best_suffix(m: int, p: int) -> int:
    """max over compositions c' of m of T(c') - p * W(c')."""
    best = m - p
    for k in range(1, m - 1):
        best = max(best, (k - p) * (1 << (m - k)) + _best_suffix(m - k, k - p))
    return best


def _pruned_visit(n, prefix, tp, p, m, target, acc: ScanPartial):
    acc.visited += 1
    if tp + _best_suffix(m, p) < target:
        return
    if tp + m - p == target:
        acc.offer(target, prefix + (m,))
    for k in range(1, m - 1):
        p2 = k - p
        _pruned_visit(n, prefix + (k,), tp + (1 << (m - k)) * p2, p2, m - k, target, acc)


def scan_unit(n: int, first: int, pruned: bool = False) -> ScanPartial:
    """Scan every composition of n whose first part is ``first``."""
    acc = ScanPartial(n)
    if first == n:
        acc.visited = 1
        acc.offer(n, (n,))
        return acc
    if not 1 <= first <= n - 2:
        raise ValueError(f"first part {first} not admissible for n={n}")
    tp, p, m = (1 << (n - first)) * first, first, n - first
    if pruned:
        target = tp + _best_suffix(m, p)
        _pruned_visit(n, (first,), tp, p, m, target, acc)
    else:
        _exhaustive_visit(n, (first,), tp, p, m, acc)
    return acc


@dataclass(frozen=True)
class ScanResult:
    n: int
    max: Dyadic
    argmax: tuple[Composition, ...]
    lemma_value: Dyadic | None
    matches_lemma: bool | None
    chain_in_argmax: bool
    compositions_scanned: int
    mode: str

    @property
    def consistent(self) -> bool:
        """Whether this n agrees with the conjectured maximum and maximizer."""
        return self.chain_in_argmax and self.matches_lemma is not False


def finish_scan(partial: ScanPartial, mode: str = "exhaustive") -> ScanResult:
    n = partial.n
    # (r, parts) order is the enumeration order of compositions
    argmax = sorted(set(partial.argmax), key=lambda c: (len(c), c))
    value = Dyadic(partial.best, n - 1)
    chain = (1,) * (n - 2) + (2,)
    lemma = lemma42_value(n, 1) if n >= 3 else None
    return ScanResult(
        n=n,
        max=value,
        argmax=tuple(Composition(n, c) for c in argmax),
        lemma_value=lemma,
        matches_lemma=None if lemma is None else value == lemma,
        chain_in_argmax=chain in argmax,
        compositions_scanned=partial.visited,
        mode=mode,
    )


def conjecture_scan(n: int, pruned: bool = False, cap: int | None = None) -> ScanResult:
    """Maximize s^f over all compositions of n and list every maximizer.

    The default mode enumerates all 2^(n-2) compositions (vectorized over
    suffixes). ``pruned=True`` does a branch-and-bound search whose bound is
    the exact best completion of each prefix, which reaches n = 40 cheaply.
    """
    limit = cap if cap is not None else (PRUNED_CAP if pruned else SCAN_CAP)
    if not 2 <= n <= limit:
        raise ValueError(f"scan range is 2..{limit}, got n={n}")
    acc = ScanPartial(n)
    for first in scan_units(n):
        acc = acc.merge(scan_unit(n, first, pruned))
    return finish_scan(acc, "pruned" if pruned else "exhaustive")
