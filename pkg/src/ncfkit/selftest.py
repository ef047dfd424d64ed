"""Built-in consistency checks run by ``ncfkit selftest``."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from . import canalyze, formulas, oracle
from .core import TruthTable, hamming_weight, parse_anf, truth_table_from_anf
from .dyadic import Dyadic
from .enumeration import enumerate_ncf, sample_ncfs

Y_ANF = "x1*x2*x3*x4*x5 + x1*x2*x3*x4 + x1*x2*x4*x5 + x1*x2*x4 + x1*x3*x4 + x1*x3 + x1*x4 + x1"
N_ANF = "x1*x2*x3 + x2*x3*x4 + x1*x3 + x3*x4 + 1"


@dataclass
class Outcome:
    name: str
    ok: bool
    detail: str
    seconds: float


def _counts():
    got = [formulas.count_ncf_total(n) for n in range(2, 6)]
    return got == [8, 64, 736, 10624], f"|NCF(2..5)| = {got}"


def _recursion(upto=30):
    bad = [n for n in range(2, upto + 1) if formulas.count_recursive(n) != formulas.count_ncf_total(n)]
    return not bad, f"n=2..{upto}, mismatches: {bad or 'none'}"


def _census(n):
    def run():
        census = oracle.classify_all(n)
        ncf = sum(v for k, v in census.items() if isinstance(k, int))
        expected = {r: formulas.count_ncf(n, r) for r in range(1, n)}
        per_layer = {k: v for k, v in census.items() if isinstance(k, int)}
        disagree = 0
        for bits in range(1 << (1 << n)):
            f = TruthTable(n, bits)
            v = canalyze.ncf_decompose(f)
            if oracle.is_ncf_by_definition(f) != (v.is_ncf and not v.structure.degenerate):
                disagree += 1
        ok = per_layer == expected and disagree == 0
        return ok, f"n={n}: {ncf} NCFs {per_layer}, oracle disagreements {disagree}"
    return run


def _bijection(n):
    def run():
        seen = set()
        roundtrip = 0
        total = 0
        for s in enumerate_ncf(n):
            total += 1
            f = canalyze.reconstruct(s)
            seen.add(f.bits)
            v = canalyze.ncf_decompose(f)
            roundtrip += v.is_ncf and v.structure == s
        ok = total == len(seen) == roundtrip == formulas.count_ncf_total(n)
        return ok, f"n={n}: {total} structures, {len(seen)} distinct tables, {roundtrip} round trips"
    return run


def _worked_examples():
    y = truth_table_from_anf(parse_anf(Y_ANF))
    v = canalyze.ncf_decompose(y)
    s = v.structure if v.is_ncf else None
    ok = (
        s is not None
        and s.composition == (2, 1, 2)
        and s.to_text() == "0 ⊕ (x1)(x3') [ (x4) [ (x2)(x5') ] ]"
        and hamming_weight(y) == formulas.weight_from_composition(s.composition) == 5
        and formulas.average_sensitivity(s.composition) == oracle.sensitivity_profile(y).average == Dyadic(15, 4)
    )
    n_tab = truth_table_from_anf(parse_anf(N_ANF))
    w = canalyze.ncf_decompose(n_tab)
    ok = ok and not w.is_ncf and isinstance(w.reason, canalyze.NoCanalyzingVariableAtDepth) and w.reason.depth == 2
    return ok, "Y: NCF (2,1,2), weight 5, s=15/16; N: not NCF at depth 2"


def _formula_oracle(max_n):
    def run():
        checked = 0
        mismatches = 0
        for n in range(2, max_n + 1):
            for s in enumerate_ncf(n):
                f = canalyze.reconstruct(s)
                comp = formulas.Composition(n, s.composition)
                checked += 1
                if hamming_weight(f) != formulas.weight_from_composition(comp, complemented=bool(s.b)):
                    mismatches += 1
                    continue
                acts = [formulas.activity_of_layer(comp, l) for l in range(1, comp.r + 1)]
                if any(oracle.activity_bruteforce(f, i) != acts[s.layer_of(i) - 1] for i in range(1, n + 1)):
                    mismatches += 1
                    continue
                if oracle.sensitivity_profile(f).average != formulas.average_sensitivity(comp):
                    mismatches += 1
        return mismatches == 0, f"{checked} NCFs with n<={max_n}, mismatches {mismatches}"
    return run


def _bounds(max_n=20):
    bad = 0
    for n in range(3, max_n + 1):
        lower, upper = formulas.sensitivity_bounds(n)
        for parts in formulas.admissible_parts(n):
            c = formulas.Composition(n, parts)
            acts = formulas._activity_numerators(c)
            s = formulas.average_sensitivity(c)
            if any(a <= b for a, b in zip(acts, acts[1:])):
                bad += 1
            elif not lower <= s < upper or (s == lower) != (c.r == 1):
                bad += 1
    return bad == 0, f"all compositions n=3..{max_n}, violations {bad}"


def _closed_forms(max_n=30):
    bad = []
    for n in range(3, max_n + 1):
        if formulas.lemma42_value(n, 1) != formulas.average_sensitivity(formulas.lemma42_composition(n, 1)):
            bad.append((n, 1))
        if n >= 4 and formulas.lemma42_value(n, 2) != formulas.average_sensitivity(formulas.lemma42_composition(n, 2)):
            bad.append((n, 2))
        if n >= 6 and n % 2 == 0:
            v3 = formulas.lemma42_value(n, 3)
            if v3 != formulas.average_sensitivity(formulas.lemma42_composition(n, 3)):
                bad.append((n, 3))
            if not formulas.lemma42_value(n, 1) == formulas.lemma42_value(n, 2) == v3:
                bad.append((n, "even"))
    return not bad, f"n=3..{max_n}, failures {bad or 'none'}"


def _conjecture(max_n):
    def run():
        inconsistent = []
        for n in range(3, max_n + 1):
            r = formulas.conjecture_scan(n)
            if not r.consistent:
                inconsistent.append(n)
        r6 = formulas.conjecture_scan(6)
        extra = formulas.Composition.of(1, 2, 1, 2) in r6.argmax and r6.max == Dyadic(21, 4)
        detail = f"n=3..{max_n}; counterexamples at {inconsistent or 'none'}; (1,2,1,2) maximal at n=6: {extra}"
        # a counterexample is a finding, not a failure
        return extra, detail
    return run


def _sampler(n=4, draws=100_000, seed=20240601):
    counts = {r: 0 for r in range(1, n)}
    for s in sample_ncfs(n, draws, seed):
        counts[len(s.layers)] += 1
    total = formulas.count_ncf_total(n)
    worst = 0.0
    for r, got in counts.items():
        p = formulas.count_ncf(n, r) / total
        sigma = (draws * p * (1 - p)) ** 0.5
        worst = max(worst, abs(got - draws * p) / sigma)
    return worst < 4.0, f"n={n}, {draws} draws, max deviation {worst:.2f} sigma"


QUICK: list[tuple[str, Callable]] = [
    ("counts n=2..5", _counts),
    ("recursion n<=10", lambda: _recursion(10)),
    ("census n=2", _census(2)),
    ("census n=3", _census(3)),
    ("bijection n=3", _bijection(3)),
    ("worked examples Y and N", _worked_examples),
    ("formula/oracle n<=3", _formula_oracle(3)),
]

FULL: list[tuple[str, Callable]] = [
    ("1 counting", _counts),
    ("2 recursion equivalence", _recursion),
    ("3 exhaustive census n=4", _census(4)),
    ("4 enumeration bijectivity n=5", _bijection(5)),
    ("5 worked examples Y and N", _worked_examples),
    ("6 formula/oracle agreement n<=5", _formula_oracle(5)),
    ("7 bounds and monotonicity", _bounds),
    ("8 closed forms", _closed_forms),
    ("9 conjecture probe n<=26", _conjecture(26)),
    ("10 sampler uniformity", _sampler),
]


def run(level: str = "quick", report: Callable[[Outcome], None] | None = None) -> list[Outcome]:
    checks = QUICK if level == "quick" else FULL
    outcomes = []
    for name, fn in checks:
        start = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"error: {exc!r}"
        out = Outcome(name, bool(ok), detail, time.perf_counter() - start)
        outcomes.append(out)
        if report:
            report(out)
    return outcomes
