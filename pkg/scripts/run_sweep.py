#!/usr/bin/env python3
"""Exhaustive genus-2 verification sweep.

Solves every extremal parameter word, verifies the rectangle-domain
bijectivity analytically and by Monte Carlo, validates the transition
rows, and prints a one-line summary per word plus totals.
"""

import argparse
import itertools
import sys
import time

from fuchsian.boundary import build_domain, solve, verify_bijectivity
from fuchsian.coding import markov_transition_matrix
from fuchsian.surface import build_regular_surface


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--genus", type=int, default=2)
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--quiet", action="store_true", help="print failures and totals only")
    args = ap.parse_args()

    surface = build_regular_surface(args.genus)
    if args.genus != 2:
        print("exhaustive sweeps are only practical at genus 2", file=sys.stderr)
        return 2

    start = time.monotonic()
    failures = 0
    for seed, bits in enumerate(itertools.product("PQ", repeat=surface.n)):
        word = "".join(bits)
        solved = solve(surface, word)
        domain = build_domain(solved)
        rep = verify_bijectivity(
            solved, domain, mode="both", samples=args.samples, seed=args.seed + seed
        )
        markov_transition_matrix(solved)  # raises on endpoint mismatch
        ok = rep.passed
        if not ok:
            failures += 1
        if not args.quiet or not ok:
            print(f"{word} {'PASS' if ok else 'FAIL'}")
    elapsed = time.monotonic() - start
    print(f"total words={2 ** surface.n} failures={failures} elapsed={elapsed:.1f}s")
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
