"""Scan the maximal average sensitivity over all compositions for a range of n.

Prints one row per n: the maximum, how many compositions attain it, whether
(1,...,1,2) is among them and whether the maximum equals the closed form.

    python scripts/scan_conjecture.py --lo 3 --hi 30
    python scripts/scan_conjecture.py --lo 31 --hi 40 --pruned
"""

import argparse
import csv
import sys
import time

from ncfkit.formulas import conjecture_scan


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lo", type=int, default=3)
    ap.add_argument("--hi", type=int, default=26)
    ap.add_argument("--pruned", action="store_true", help="branch-and-bound instead of full enumeration")
    args = ap.parse_args()

    out = csv.writer(sys.stdout)
    out.writerow(["n", "max", "max_decimal", "argmax_count", "chain_in_argmax", "matches_closed_form", "seconds"])
    for n in range(args.lo, args.hi + 1):
        start = time.perf_counter()
        r = conjecture_scan(n, pruned=args.pruned)
        out.writerow([n, str(r.max), r.max.decimal(), len(r.argmax), r.chain_in_argmax, r.matches_lemma,
                      f"{time.perf_counter() - start:.3f}"])
        sys.stdout.flush()


if __name__ == "__main__":
    main()
