#!/usr/bin/env python3
"""Exploratory attractor experiment.

Random pairs on the torus are iterated under the extension map and their
distance to the rectangle domain is reported as a histogram.  Convergence
of the whole torus to the domain is conjectural; forward invariance of
the domain is a theorem and is checked alongside.
"""

import argparse
import json

from fuchsian.attractor import attractor_experiment
from fuchsian.boundary import build_domain, solve
from fuchsian.surface import build_regular_surface


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--genus", type=int, default=2)
    ap.add_argument("--params", default="PPPPQPQQPPQQ")
    ap.add_argument("--iters", type=int, default=50)
    ap.add_argument("--samples", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    surface = build_regular_surface(args.genus)
    solved = solve(surface, args.params)
    domain = build_domain(solved)
    report = attractor_experiment(
        solved, domain, iterations=args.iters, samples=args.samples, seed=args.seed
    )
    print(json.dumps(report.to_json(), indent=2))
    return 0 if report.forward_invariant_ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
