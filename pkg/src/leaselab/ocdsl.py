"""Two-phase online connected dominating set leasing.

Phase 1 grows fractional weights over each undominated request node's
dominators until they sum to one, rounds them against per-triplet random
thresholds, falls back to a cheapest-lease purchase when rounding misses,
and buys cheapest-lease representatives for the chosen dominators by greedy
cover. Phase 2 connects the representatives that cannot already reach the
root through active nodes, by leasing tree edges through the Steiner
subsystem and mirroring every leased graph edge as two node triplets with
the same lease and start.

With ``connect=False`` the state runs Phase 1 step i alone, which is the
randomized rounding algorithm for the domination-only problem.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .errors import EmptyRequest, NonMonotonicTime
from .graphs import Graph, connected_component, dominators
from .instances import PurchaseLedger
from .leases import LeaseCatalog, Triplet
from .steiner import OsflState


class UncoveredDominator(RuntimeError):
    """Greedy representative selection stalled; cannot happen on valid input."""


@dataclass
class StepReport:
    t: int
    requested: Tuple[int, ...]
    purchases: List[Tuple[int, int, int, Fraction]]  # (node, lease, start, cost)
    s_t: List[Triplet]
    representatives: List[Triplet]
    root: Optional[Triplet]
    r_t: List[int]
    c1_increment: Fraction
    c2_increment: Fraction
    growth_rounds: int

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "requested": list(self.requested),
            "purchases": [
                [node, lease, start, str(cost)]
                for node, lease, start, cost in self.purchases
            ],
            "s_t": [list(tr) for tr in self.s_t],
            "representatives": [list(tr) for tr in self.representatives],
            "root": list(self.root) if self.root else None,
            "r_t": list(self.r_t),
            "c1_increment": str(self.c1_increment),
            "c2_increment": str(self.c2_increment),
            "growth_rounds": self.growth_rounds,
        }


class OcdslState:
    """One online run; serve_request() consumes the request sequence in order."""

    def __init__(
        self,
        graph: Graph,
        catalog: LeaseCatalog,
        seed: int | str = 0,
        connect: bool = True,
    ):
        self.graph = graph
        self.catalog = catalog
        self.connect_phase = connect
        self.weights: Dict[Triplet, Fraction] = {}
        self.thresholds: Dict[Triplet, float] = {}
        self.ledger = PurchaseLedger()
        self._mu_rng = random.Random(f"{seed}:mu")
        self.osfl = (
            OsflState(graph, catalog, random.Random(f"{seed}:hst")) if connect else None
        )
        # threshold = min of 2*ceil(log2(n+1)) uniforms; n.bit_length() is that ceiling
        self.mu_draws = 2 * graph.node_count.bit_length()
        self.c1 = Fraction(0)
        self.c2 = Fraction(0)
        self.fractional_cost = Fraction(0)
        self.max_dominator_count = 0  # over growth events
        self.min_guard_sum: Optional[Fraction] = None  # min post-growth dominator mass
        self.last_time: int | None = None

    # ------------------------------------------------------------------ helpers

    def active_nodes(self, t: int) -> Set[int]:
        return self.ledger.active_nodes(self.catalog, t)

    def has_active_dominator(self, u: int, t: int) -> bool:
        active = self.active_nodes(t)
        return u in active or any(v in active for v in self.graph.neighbors(u))

    def weight(self, tr: Triplet) -> Fraction:
        return self.weights.get(tr, Fraction(0))

    def threshold(self, tr: Triplet) -> float:
        """Per-triplet rounding threshold, sampled once on first touch."""
        mu = self.thresholds.get(tr)
        if mu is None:
            mu = min(self._mu_rng.random() for _ in range(self.mu_draws))
            self.thresholds[tr] = mu
        return mu

    def _buy(
        self, tr: Triplet, t: int, phase: int, log: List[Tuple[int, int, int, Fraction]]
    ) -> Fraction:
        cost = self.catalog.cost(tr.lease)
        self.ledger.add(tr, step=t, cost=cost)
        if phase == 1:
            self.c1 += cost
        else:
            self.c2 += cost
        log.append((tr.node, tr.lease, tr.start, cost))
        return cost

    # ------------------------------------------------------------------ phase 1

    def grow_fractional(self, u: int, t: int) -> int:
        """Multiplicative weight growth until u's dominators carry total mass >= 1."""
        doms = dominators(self.graph, u, t, self.catalog).triplets
        w_count = len(doms)
        lease_count = len(self.catalog)
        total = sum((self.weight(tr) for tr in doms), Fraction(0))
        rounds = 0
        while total < 1:
            rounds += 1
            total = Fraction(0)
            for tr in doms:
                cost = self.catalog.cost(tr.lease)
                old = self.weight(tr)
                new = old * (1 + 1 / cost) + 1 / (w_count * lease_count * cost)
                self.weights[tr] = new
                self.fractional_cost += cost * (new - old)
                total += new
        self.max_dominator_count = max(self.max_dominator_count, w_count)
        if self.min_guard_sum is None or total < self.min_guard_sum:
            self.min_guard_sum = total
        return rounds

    def round_purchases(
        self, u: int, t: int, log: Optional[List[Tuple[int, int, int, Fraction]]] = None
    ) -> List[Triplet]:
        """Buy every dominator whose weight beats its frozen threshold."""
        log = log if log is not None else []
        bought = []
        for tr in dominators(self.graph, u, t, self.catalog).triplets:
            if self.weight(tr) > self.threshold(tr) and tr not in self.ledger:
                self._buy(tr, t, 1, log)
                bought.append(tr)
        return bought

    def fallback(
        self, u: int, t: int, log: Optional[List[Tuple[int, int, int, Fraction]]] = None
    ) -> Optional[Triplet]:
        """Guarantee domination: buy the cheapest-lease triplet on u if rounding missed."""
        if self.has_active_dominator(u, t):
            return None
        log = log if log is not None else []
        tr = self.catalog.triplet_at(u, 1, t)
        self._buy(tr, t, 1, log)
        return tr

    def select_representatives(
        self,
        s_t: Sequence[Triplet],
        d_t: Sequence[int],
        t: int,
        log: Optional[List[Tuple[int, int, int, Fraction]]] = None,
    ) -> Tuple[List[Triplet], Dict[Triplet, Triplet]]:
        """Greedy cover of the chosen dominators by cheapest-lease request nodes."""
        log = log if log is not None else []
        uncovered: Set[Triplet] = set(s_t)
        reps: List[Triplet] = []
        assignment: Dict[Triplet, Triplet] = {}
        while uncovered:
            uncovered_nodes = {tr.node for tr in uncovered}
            best_u, best_count = -1, 0
            for u in d_t:
                count = len(uncovered_nodes & set(self.graph.closed_neighborhood(u)))
                if count > best_count:
                    best_u, best_count = u, count
            if best_count == 0:
                raise UncoveredDominator(f"no request node covers {sorted(uncovered)}")
            rep = self.catalog.triplet_at(best_u, 1, t)
            if rep not in self.ledger:
                self._buy(rep, t, 1, log)
            reps.append(rep)
            reach = set(self.graph.closed_neighborhood(best_u))
            for tr in sorted(uncovered):
                if tr.node in reach:
                    assignment[tr] = rep
                    uncovered.discard(tr)
        return reps, assignment

    # ------------------------------------------------------------------ driver

    def serve_request(self, nodes: Sequence[int], t: int) -> StepReport:
        """Run both phases for one request step."""
        if self.last_time is not None and t <= self.last_time:
            raise NonMonotonicTime(f"request at t={t} after t={self.last_time}")
        requested = tuple(sorted(set(nodes)))
        if not requested:
            raise EmptyRequest(f"empty request at t={t}")
        self.last_time = t
        c1_before, c2_before = self.c1, self.c2
        purchases: List[Tuple[int, int, int, Fraction]] = []
        rounds = 0

        # Phase 1 step i: dominate every requested node
        for u in requested:
            if self.has_active_dominator(u, t):
                continue
            rounds += self.grow_fractional(u, t)
            self.round_purchases(u, t, purchases)
            self.fallback(u, t, purchases)

        # Phase 1 step ii: assign dominators and buy representatives
        s_set: Set[Triplet] = set()
        active = self.ledger.active_triplets(self.catalog, t)
        for u in requested:
            reach = set(self.graph.closed_neighborhood(u))
            candidates = [tr for tr in active if tr.node in reach]
            chosen = min(
                candidates,
                key=lambda tr: (self.catalog.cost(tr.lease), tr.node, tr.start, tr.lease),
            )
            s_set.add(chosen)
        s_t = sorted(s_set)

        reps: List[Triplet] = []
        root: Optional[Triplet] = None
        r_nodes: List[int] = []
        if self.connect_phase:
            reps, _ = self.select_representatives(s_t, requested, t, purchases)
            root = min(reps, key=lambda tr: tr.node)
            active_now = self.active_nodes(t)
            root_comp = connected_component(self.graph, root.node, active_now)
            r_nodes = sorted({tr.node for tr in reps} - root_comp)
            assert self.osfl is not None
            new_edges = self.osfl.connect(r_nodes, root.node, t)
            for entry in new_edges:
                for node in entry.edge:
                    tr = Triplet(node, entry.lease, entry.start)
                    if tr not in self.ledger:
                        self._buy(tr, t, 2, purchases)

        return StepReport(
            t=t,
            requested=requested,
            purchases=purchases,
            s_t=s_t,
            representatives=reps,
            root=root,
            r_t=r_nodes,
            c1_increment=self.c1 - c1_before,
            c2_increment=self.c2 - c2_before,
            growth_rounds=rounds,
        )

    def total_cost(self) -> Fraction:
        return self.c1 + self.c2
