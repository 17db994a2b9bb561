"""Instance generators: structured graphs, connected G(n,p), and a permit-stressing adversary."""

from __future__ import annotations

import random
from typing import Dict, List, Tuple

from .graphs import Graph, build_graph
from .instances import Instance, make_instance
from .leases import LeaseCatalog


class BadParams(ValueError):
    pass


GENERATOR_KINDS = ("path", "star", "grid", "random-gnp-connected", "pp-adversary")

# canonical catalogs by lease count; durations powers of two, dyadic costs
_CANONICAL = {
    1: ((1, 1),),
    2: ((1, 1), (4, 2)),
    3: ((1, 1), (4, 2), (8, 3)),
    4: ((1, 1), (4, 2), (8, 3), (32, 6)),
}


def canonical_catalog(lease_count: int) -> LeaseCatalog:
    if lease_count not in _CANONICAL:
        raise BadParams(f"no canonical catalog with {lease_count} lease types")
    return LeaseCatalog.from_pairs(_CANONICAL[lease_count])


def burst_times(horizon: int) -> List[int]:
    """Nested bursty request times 0, 1, 3, 7, ... below the horizon.

    Exponentially spaced days hit every lease scale, the pattern behind the
    parking-permit lower bound.
    """
    times = [0]
    j = 0
    while (1 << (j + 1)) - 1 < horizon:
        times.append((1 << (j + 1)) - 1)
        j += 1
    return times


def _path_edges(n: int) -> List[Tuple[int, int]]:
    return [(i, i + 1) for i in range(n - 1)]


def _star_edges(n: int) -> List[Tuple[int, int]]:
    return [(0, i) for i in range(1, n)]


def _grid_edges(rows: int, cols: int) -> List[Tuple[int, int]]:
    edges = []
    for r in range(rows):
        for c in range(cols):
            u = r * cols + c
            if c + 1 < cols:
                edges.append((u, u + 1))
            if r + 1 < rows:
                edges.append((u, u + cols))
    return edges


def _gnp_connected(n: int, p: float, rng: random.Random, max_tries: int = 500) -> Graph:
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for _ in range(max_tries):
        edges = [e for e in pairs if rng.random() < p]
        try:
            return build_graph(n, edges)
        except ValueError:
            continue
    raise BadParams(f"no connected G({n}, {p}) sample after {max_tries} tries")


def _uniform_requests(
    n: int, steps: int, size: int, rng: random.Random, t0: int = 1
) -> List[Tuple[int, List[int]]]:
    size = max(1, min(size, n))
    return [
        (t0 + i, sorted(rng.sample(range(n), size))) for i in range(steps)
    ]


def gen_instance(kind: str, params: Dict, rng: random.Random) -> Instance:
    """Build a validated instance; deterministic for a given seeded rng."""
    if kind not in GENERATOR_KINDS:
        raise BadParams(f"unknown generator kind {kind!r}")
    lease_count = int(params.get("L", 1))
    catalog = canonical_catalog(lease_count)
    steps = int(params.get("T", 2))
    size = int(params.get("k", 1))

    if kind == "pp-adversary":
        n = int(params.get("n", 4))
        if n < 2:
            raise BadParams("pp-adversary wants a star, n >= 2")
        graph = build_graph(n, _star_edges(n))
        horizon = int(params.get("horizon", catalog.max_duration()))
        leaves = list(range(1, n))
        requests = [
            (t, [leaves[i % len(leaves)]]) for i, t in enumerate(burst_times(horizon))
        ]
        return make_instance(graph, catalog, requests)

    if kind == "path":
        n = int(params.get("n", 3))
        graph = build_graph(n, _path_edges(n))
    elif kind == "star":
        n = int(params.get("n", 4))
        graph = build_graph(n, _star_edges(n))
    elif kind == "grid":
        rows = int(params.get("rows", 2))
        cols = int(params.get("cols", 3))
        graph = build_graph(rows * cols, _grid_edges(rows, cols))
    else:  # random-gnp-connected
        n = int(params.get("n", 6))
        p = float(params.get("p", 0.4))
        graph = _gnp_connected(n, p, rng)

    requests = _uniform_requests(graph.node_count, steps, size, rng)
    return make_instance(graph, catalog, requests)
