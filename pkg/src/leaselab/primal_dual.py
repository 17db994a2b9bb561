"""Deterministic primal-dual algorithm for dominating set leasing.

Each request occurrence (node, step) owns a dual variable. An uncovered
occurrence raises its dual by the minimum residual slack among its
dominators, which never violates a dual constraint, and buys every
dominator driven tight. Weak duality then sandwiches the purchase cost
between the dual value and |L|*(Delta+1) times it.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Tuple

from .errors import NonMonotonicTime
from .graphs import Graph, dominators
from .instances import PurchaseLedger
from .leases import LeaseCatalog, Triplet


class DualState:
    def __init__(self, graph: Graph, catalog: LeaseCatalog):
        self.graph = graph
        self.catalog = catalog
        self.y: Dict[Tuple[int, int], Fraction] = {}  # (node, step) -> dual value
        self.slack: Dict[Triplet, Fraction] = {}  # c_l minus dual mass charged in
        self.ledger = PurchaseLedger()
        self.last_time: int | None = None

    def serve(self, u: int, t: int) -> Tuple[List[Triplet], Fraction]:
        """Serve one request occurrence; returns (purchases, dual raise)."""
        if self.last_time is not None and t < self.last_time:
            raise NonMonotonicTime(f"request at t={t} after t={self.last_time}")
        self.last_time = t
        doms = dominators(self.graph, u, t, self.catalog).triplets
        if any(tr in self.ledger for tr in doms):
            self.y[(u, t)] = Fraction(0)
            return [], Fraction(0)
        for tr in doms:
            if tr not in self.slack:
                self.slack[tr] = self.catalog.cost(tr.lease)
        raise_by = min(self.slack[tr] for tr in doms)
        self.y[(u, t)] = self.y.get((u, t), Fraction(0)) + raise_by
        bought: List[Triplet] = []
        for tr in doms:
            self.slack[tr] -= raise_by
            if self.slack[tr] == 0:
                self.ledger.add(tr, step=t, cost=self.catalog.cost(tr.lease))
                bought.append(tr)
        return bought, raise_by

    def totals(self) -> Tuple[Fraction, Fraction]:
        """(primal purchase cost, dual objective value)."""
        return self.ledger.total_cost(), sum(self.y.values(), Fraction(0))


def pd_serve(state: DualState, u: int, t: int) -> Tuple[List[Triplet], Fraction]:
    return state.serve(u, t)


def pd_totals(state: DualState) -> Tuple[Fraction, Fraction]:
    return state.totals()
