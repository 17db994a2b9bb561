"""Problem instances and node-purchase ledgers shared by algorithms and oracle."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Sequence, Set, Tuple

from .graphs import Graph, build_graph
from .leases import LeaseCatalog, Triplet, as_cost


class InstanceError(ValueError):
    pass


class DuplicatePurchase(ValueError):
    pass


@dataclass(frozen=True)
class Instance:
    graph: Graph
    catalog: LeaseCatalog
    requests: Tuple[Tuple[int, Tuple[int, ...]], ...]  # (t, sorted node tuple)
    horizon: int

    @property
    def times(self) -> Tuple[int, ...]:
        return tuple(t for t, _ in self.requests)

    def to_json(self) -> dict:
        leases = []
        for lt in self.catalog:
            cost = int(lt.cost) if lt.cost.denominator == 1 else float(lt.cost)
            leases.append({"duration": lt.duration, "cost": cost})
        return {
            "n": self.graph.node_count,
            "edges": [list(e) for e in self.graph.edges()],
            "leases": leases,
            "requests": [{"t": t, "nodes": list(nodes)} for t, nodes in self.requests],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Instance":
        graph = build_graph(int(data["n"]), [tuple(e) for e in data["edges"]])
        catalog = LeaseCatalog.from_pairs(
            (entry["duration"], as_cost(entry["cost"])) for entry in data["leases"]
        )
        requests = [(int(r["t"]), r["nodes"]) for r in data["requests"]]
        return make_instance(graph, catalog, requests)


def make_instance(
    graph: Graph,
    catalog: LeaseCatalog,
    requests: Sequence[Tuple[int, Sequence[int]]],
) -> Instance:
    """Validate request structure: strictly increasing times, non-empty node sets."""
    cleaned: List[Tuple[int, Tuple[int, ...]]] = []
    prev = None
    for t, nodes in requests:
        node_tuple = tuple(sorted(set(int(v) for v in nodes)))
        if not node_tuple:
            raise InstanceError(f"request at t={t} has no nodes")
        if t < 0:
            raise InstanceError(f"request time {t} is negative")
        if prev is not None and t <= prev:
            raise InstanceError(f"request times must strictly increase ({prev} then {t})")
        if node_tuple[0] < 0 or node_tuple[-1] >= graph.node_count:
            raise InstanceError(f"request at t={t} names nodes outside the graph")
        cleaned.append((int(t), node_tuple))
        prev = t
    if not cleaned:
        raise InstanceError("instance has no requests")
    horizon = max(t for t, _ in cleaned) + catalog.max_duration()
    return Instance(graph=graph, catalog=catalog, requests=tuple(cleaned), horizon=horizon)


@dataclass
class PurchaseLedger:
    """The online solution: bought triplets with purchase step and cost paid."""

    entries: Dict[Triplet, Tuple[int, Fraction]] = field(default_factory=dict)

    def add(self, tr: Triplet, step: int, cost: Fraction) -> None:
        if tr in self.entries:
            raise DuplicatePurchase(f"triplet {tr} bought twice")
        self.entries[tr] = (step, cost)

    def __contains__(self, tr: Triplet) -> bool:
        return tr in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Triplet]:
        return iter(self.entries)

    def total_cost(self) -> Fraction:
        return sum((cost for _, cost in self.entries.values()), Fraction(0))

    def active_triplets(self, catalog: LeaseCatalog, t: int) -> List[Triplet]:
        return [
            tr
            for tr in self.entries
            if tr.start <= t < tr.start + catalog.duration(tr.lease)
        ]

    def active_nodes(self, catalog: LeaseCatalog, t: int) -> Set[int]:
        return {tr.node for tr in self.active_triplets(catalog, t)}

    def rows(self) -> List[Tuple[int, int, int, int, Fraction]]:
        """(node, lease, start, step, cost) per entry, in purchase order."""
        return [
            (tr.node, tr.lease, tr.start, step, cost)
            for tr, (step, cost) in self.entries.items()
        ]
