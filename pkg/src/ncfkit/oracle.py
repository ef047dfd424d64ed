"""Brute-force ground truth.

Nothing here reuses the bit-parallel machinery of ``core`` or the peeling in
``canalyze``: functions are flattened to plain lists of 0/1 values and every
quantity is computed straight from its definition with explicit loops.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from .core import TruthTable
from .dyadic import Dyadic

ORACLE_MAX_VARS = 8
CLASSIFY_MAX_VARS = 4


def _values(f: TruthTable) -> list[int]:
    return [f[t] for t in range(1 << f.n)]


@dataclass(frozen=True)
class ActivityVector:
    n: int
    activities: tuple[Dyadic, ...]

    def __getitem__(self, i: int) -> Dyadic:
        return self.activities[i - 1]

    def total(self) -> Dyadic:
        return sum(self.activities, Dyadic(0))


@dataclass(frozen=True)
class SensitivityProfile:
    n: int
    pointwise: tuple[int, ...]
    average: Dyadic


def activity_bruteforce(f: TruthTable, i: int) -> Dyadic:
    """Fraction of (n-1)-cube points where flipping x_i flips f."""
    n = f.n
    if not 1 <= i <= n:
        raise IndexError(f"variable index {i} out of range 1..{n}")
    vals = _values(f)
    bit = 1 << (i - 1)
    count = 0
    for t in range(1 << n):
        if t & bit:
            continue
        if vals[t] != vals[t | bit]:
            count += 1
    return Dyadic(count, n - 1)


def activities(f: TruthTable) -> ActivityVector:
    return ActivityVector(f.n, tuple(activity_bruteforce(f, i) for i in range(1, f.n + 1)))


def sensitivity_profile(f: TruthTable) -> SensitivityProfile:
    n = f.n
    vals = _values(f)
    sens = []
    for t in range(1 << n):
        sens.append(sum(1 for k in range(n) if vals[t] != vals[t ^ (1 << k)]))
    return SensitivityProfile(n, tuple(sens), Dyadic(sum(sens), n))


def weight_bruteforce(f: TruthTable) -> int:
    return sum(_values(f))


def _restrict_values(vals: tuple[int, ...], n: int, k: int, a: int) -> tuple[int, ...]:
    # fix coordinate k (0-based) to a, keep the others in order
    out = []
    for t in range(1 << n):
        if (t >> k) & 1 == a:
            out.append(vals[t])
    return tuple(out)


@lru_cache(maxsize=1 << 16)
def _ncf_values(vals: tuple[int, ...], n: int) -> bool:
    if n == 1:
        return vals[0] != vals[1]
    for k in range(n):
        for a in (0, 1):
            fixed = _restrict_values(vals, n, k, a)
            if all(v == fixed[0] for v in fixed):
                if _ncf_values(_restrict_values(vals, n, k, 1 - a), n - 1):
                    return True
    return False


def is_ncf_by_definition(f: TruthTable) -> bool:
    """Nested canalyzing in some variable order, checked recursively.

    A variable canalyzes to a constant; the complementary restriction must
    again be nested canalyzing, down to a single nonconstant variable.
    """
    if f.n > ORACLE_MAX_VARS:
        raise ValueError(f"brute-force NCF test limited to n <= {ORACLE_MAX_VARS}")
    if f.n == 0:
        return False
    return _ncf_values(tuple(_values(f)), f.n)


NOT_NCF = "not_ncf"
DEGENERATE = "degenerate"


def classify_range(n: int, start: int, stop: int) -> Counter:
    """Tally decomposer verdicts for tables with bits in [start, stop)."""
    from .canalyze import ncf_decompose

    tally: Counter = Counter()
    for bits in range(start, stop):
        verdict = ncf_decompose(TruthTable(n, bits))
        if not verdict.is_ncf:
            tally[NOT_NCF] += 1
        elif verdict.structure.degenerate:
            tally[DEGENERATE] += 1
        else:
            tally[len(verdict.structure.layers)] += 1
    return tally


def classify_all(n: int, workers: int = 1) -> dict:
    """Census of all 2^(2^n) tables: layer number (or not_ncf) -> count."""
    if not 0 <= n <= CLASSIFY_MAX_VARS:
        raise ValueError(f"classify_all is limited to n <= {CLASSIFY_MAX_VARS}")
    total = 1 << (1 << n)
    if workers <= 1:
        tally = classify_range(n, 0, total)
    else:
        from concurrent.futures import ProcessPoolExecutor

        step = -(-total // workers)
        ranges = [(n, s, min(s + step, total)) for s in range(0, total, step)]
        tally = Counter()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(classify_range, *zip(*ranges)):
                tally.update(part)
    layers = sorted(k for k in tally if isinstance(k, int))
    out = {k: tally[k] for k in layers}
    for key in (DEGENERATE, NOT_NCF):
        if tally[key]:
            out[key] = tally[key]
    return out


def census_csv(census: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["layer_number", "count"])
    for k, v in census.items():
        w.writerow([k, v])
    return buf.getvalue()
