"""Online Steiner forest leasing: permits per tree edge, realized as graph leases.

Each edge of the embedded tree runs its own parking-permit instance whose
rainy days are the steps on which the edge lies on some terminal-to-root tree
path. A tree edge of length w behaves like w parallel unit permit instances
charged together, so decisions follow the unit instance and the tree-side
cost scales by w. Every permit purchase is realized once as graph-edge leases
along the shortest path between the endpoint cluster centers, deduplicated by
(edge, lease, start).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Set, Tuple

from .errors import NonMonotonicTime
from .graphs import Graph
from .hst import Hst, build_hst, edge_realization
from .leases import LeaseCatalog
from .permits import PermitState


@dataclass(frozen=True)
class EdgeLease:
    edge: Tuple[int, int]  # normalized (min, max) graph edge
    lease: int
    start: int
    step: int  # request time at which the lease was bought


class OsflState:
    """State of one online Steiner-forest-leasing run over a fixed embedding."""

    def __init__(self, graph: Graph, catalog: LeaseCatalog, rng: random.Random):
        self.graph = graph
        self.catalog = catalog
        self.hst: Hst = build_hst(graph, rng)
        self.edge_permits: Dict[int, PermitState] = {}  # child cluster id -> permit instance
        self.ledger: List[EdgeLease] = []
        self._seen: Set[Tuple[Tuple[int, int], int, int]] = set()
        self.tree_cost = Fraction(0)  # length-weighted permit cost, diagnostic
        self.last_time: int | None = None

    def connect(self, terminals, root: int, t: int) -> List[EdgeLease]:
        """Lease enough graph edges that every terminal reaches the root at time t."""
        if self.last_time is not None and t < self.last_time:
            raise NonMonotonicTime(f"connect at t={t} after t={self.last_time}")
        self.last_time = t
        needed: Set[int] = set()
        for r in sorted(set(terminals)):
            if r == root:
                continue
            path = _tree_edge_children(self.hst, r, root)
            needed.update(path)
        new_entries: List[EdgeLease] = []
        for cid in sorted(needed):
            permit = self.edge_permits.get(cid)
            if permit is None:
                permit = PermitState(self.catalog)
                self.edge_permits[cid] = permit
            for lease, start in permit.request(t):
                self.tree_cost += self.hst.edge_length(cid) * self.catalog.cost(lease)
                for a, b in edge_realization(self.hst, cid, self.graph):
                    edge = (a, b) if a < b else (b, a)
                    key = (edge, lease, start)
                    if key in self._seen:
                        continue
                    self._seen.add(key)
                    entry = EdgeLease(edge=edge, lease=lease, start=start, step=t)
                    self.ledger.append(entry)
                    new_entries.append(entry)
        return new_entries

    def cost(self) -> Fraction:
        """Total leasing cost of the graph-edge ledger (unit edge weights)."""
        return sum((self.catalog.cost(e.lease) for e in self.ledger), Fraction(0))

    def active_edges(self, t: int) -> Set[Tuple[int, int]]:
        return {
            e.edge
            for e in self.ledger
            if e.start <= t < e.start + self.catalog.duration(e.lease)
        }


def _tree_edge_children(h: Hst, u: int, v: int) -> List[int]:
    """Tree edges on the leaf(u)-leaf(v) path, each named by its child cluster id."""
    up = h.path_to_root(h.leaf_of[u])
    seen = {cid: i for i, cid in enumerate(up)}
    down = []
    cur = h.leaf_of[v]
    while cur not in seen:
        down.append(cur)
        cur = h.clusters[cur].parent
    return up[: seen[cur]] + down


def osfl_init(graph: Graph, catalog: LeaseCatalog, rng: random.Random) -> OsflState:
    return OsflState(graph, catalog, rng)


def osfl_connect(state: OsflState, terminals, root: int, t: int) -> List[EdgeLease]:
    return state.connect(terminals, root, t)


def osfl_cost(state: OsflState) -> Fraction:
    return state.cost()
