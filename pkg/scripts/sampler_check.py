"""Empirical layer-number frequencies of the uniform sampler against exact counts.

    python scripts/sampler_check.py --n 5 --draws 100000 --seed 1
"""

import argparse
from collections import Counter

from scipy.stats import chisquare

from ncfkit.enumeration import RNG_ALGORITHM, sample_ncfs
from ncfkit.formulas import count_ncf, count_ncf_total


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--draws", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    counts = Counter(len(s.layers) for s in sample_ncfs(args.n, args.draws, args.seed))
    total = count_ncf_total(args.n)
    observed, expected = [], []
    print(f"# {RNG_ALGORITHM}, seed {args.seed}")
    print("r,observed,expected,z")
    for r in range(1, args.n):
        p = count_ncf(args.n, r) / total
        mean = args.draws * p
        z = (counts[r] - mean) / (args.draws * p * (1 - p)) ** 0.5
        observed.append(counts[r])
        expected.append(mean)
        print(f"{r},{counts[r]},{mean:.1f},{z:+.2f}")
    print(f"# chi-square p = {chisquare(observed, expected).pvalue:.4f}")


if __name__ == "__main__":
    main()
