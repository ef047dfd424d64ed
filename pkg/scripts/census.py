"""Layer-number census: closed-form counts next to enumerated and exhaustive ones.

For n <= 4 every truth table is classified; for n <= 6 every layer structure
is enumerated and its table reconstructed; beyond that only the formula runs.

    python scripts/census.py --max-n 6
"""

import argparse
from collections import Counter

from ncfkit.canalyze import reconstruct
from ncfkit.enumeration import enumerate_ncf
from ncfkit.formulas import count_ncf, count_ncf_total, count_recursive
from ncfkit.oracle import classify_all


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=5)
    args = ap.parse_args()

    print("n,r,formula,enumerated,exhaustive")
    for n in range(2, args.max_n + 1):
        enumerated = Counter()
        if n <= 6:
            seen = set()
            for s in enumerate_ncf(n):
                seen.add(reconstruct(s).bits)
                enumerated[len(s.layers)] += 1
            assert len(seen) == sum(enumerated.values())
        exhaustive = classify_all(n) if n <= 4 else {}
        for r in range(1, n):
            print(f"{n},{r},{count_ncf(n, r)},{enumerated.get(r, '')},{exhaustive.get(r, '')}")
        check = "ok" if count_recursive(n) == count_ncf_total(n) else "MISMATCH"
        print(f"{n},total,{count_ncf_total(n)},{sum(enumerated.values()) or ''},recursion {check}")


if __name__ == "__main__":
    main()
