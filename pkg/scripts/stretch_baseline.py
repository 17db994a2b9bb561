#!/usr/bin/env python3
"""Monte-Carlo baseline for the embedding stretch regression test.

Builds the tree embedding of the 8-node path for many seeds and reports the
mean stretch of the endpoint pair. The printed value is frozen into
tests/test_acceptance.py; the acceptance test allows a +10% band over it.
"""

import argparse
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from leaselab.graphs import build_graph
from leaselab.hst import build_hst, tree_distance


def mean_endpoint_stretch(n: int, seeds: int) -> float:
    graph = build_graph(n, [(i, i + 1) for i in range(n - 1)])
    span = n - 1
    total = 0.0
    for seed in range(seeds):
        h = build_hst(graph, random.Random(seed))
        total += tree_distance(h, 0, n - 1) / span
    return total / seeds


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nodes", type=int, default=8)
    parser.add_argument("--seeds", type=int, default=10_000)
    args = parser.parse_args()
    value = mean_endpoint_stretch(args.nodes, args.seeds)
    print(f"mean endpoint stretch over {args.seeds} seeds on the {args.nodes}-node path:")
    print(f"{value:.6f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
