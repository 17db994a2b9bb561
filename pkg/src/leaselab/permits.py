"""Parking permits on the aligned slot hierarchy.

The online rule: an uncovered rainy day buys the smallest permit and charges
its cost into every enclosing slot; whenever the accumulated spend of smaller
permit types inside a type-k slot reaches c_k, that slot's permit is bought
too (largest type first). The offline optimum is an exact DP over the nested
slot tree, which exists because durations are powers of two and starts are
aligned.
"""

from __future__ import annotations

from bisect import bisect_left
from fractions import Fraction
from typing import Dict, Iterable, List, Set, Tuple

from .errors import NonMonotonicTime
from .leases import LeaseCatalog, slot_start


class RainyDayOutOfHorizon(ValueError):
    pass


class PermitState:
    """One online parking-permit instance; mutate via request()."""

    def __init__(self, catalog: LeaseCatalog):
        self.catalog = catalog
        self.owned: Set[Tuple[int, int]] = set()  # (lease index, start)
        self.spend: Dict[Tuple[int, int], Fraction] = {}  # (lease index, slot) -> cost of smaller types inside
        self.purchases: List[Tuple[int, int, int, Fraction]] = []  # (t, lease, start, cost)
        self.last_time: int | None = None

    def covered(self, t: int) -> bool:
        return any(
            s <= t < s + self.catalog.duration(k) for k, s in self.owned
        )

    def total_cost(self) -> Fraction:
        return sum((p[3] for p in self.purchases), Fraction(0))

    def _buy(self, k: int, t: int) -> Tuple[int, int]:
        start = self.catalog.slot(t, k)
        cost = self.catalog.cost(k)
        self.owned.add((k, start))
        self.purchases.append((t, k, start, cost))
        # charge into every strictly larger enclosing slot
        for bigger in range(k + 1, len(self.catalog) + 1):
            key = (bigger, self.catalog.slot(t, bigger))
            self.spend[key] = self.spend.get(key, Fraction(0)) + cost
        return (k, start)

    def request(self, t: int) -> List[Tuple[int, int]]:
        """Serve a rainy day; returns the (lease, start) pairs bought, if any."""
        if self.last_time is not None and t < self.last_time:
            raise NonMonotonicTime(f"request at t={t} after t={self.last_time}")
        self.last_time = t
        if self.covered(t):
            return []
        bought = [self._buy(1, t)]
        while True:
            fired = None
            for k in range(len(self.catalog), 1, -1):
                key = (k, self.catalog.slot(t, k))
                if key in self.owned:
                    continue
                if self.spend.get(key, Fraction(0)) >= self.catalog.cost(k):
                    fired = k
                    break
            if fired is None:
                break
            bought.append(self._buy(fired, t))
        return bought


def pp_request(state: PermitState, t: int) -> List[Tuple[int, int]]:
    return state.request(t)


def pp_offline_opt(
    rainy: Iterable[int], catalog: LeaseCatalog, horizon: int | None = None
) -> Fraction:
    """Exact minimum cover cost for the given rainy days.

    DP over the slot hierarchy: a type-k slot either buys its own permit or
    decomposes into its nested type-(k-1) slots; the base type pays its cost
    iff the slot contains a rainy day.
    """
    days = sorted(set(rainy))
    if not days:
        return Fraction(0)
    if horizon is None:
        horizon = max(days) + 1
    if days[0] < 0 or days[-1] >= horizon:
        raise RainyDayOutOfHorizon(
            f"rainy days must lie in [0, {horizon}), got {days[0]}..{days[-1]}"
        )

    def has_rainy(lo: int, hi: int) -> bool:
        i = bisect_left(days, lo)
        return i < len(days) and days[i] < hi

    durations = [lt.duration for lt in catalog]
    costs = [lt.cost for lt in catalog]

    def opt(k: int, s: int) -> Fraction:
        d = durations[k - 1]
        if not has_rainy(s, s + d):
            return Fraction(0)
        if k == 1:
            return costs[0]
        step = durations[k - 2]
        split = sum((opt(k - 1, s2) for s2 in range(s, s + d, step)), Fraction(0))
        return min(costs[k - 1], split)

    top = len(catalog)
    d_top = durations[-1]
    total = Fraction(0)
    s = 0
    while s < horizon:
        total += opt(top, s)
        s += d_top
    return total


def pp_brute_force_opt(
    rainy: Iterable[int], catalog: LeaseCatalog, horizon: int | None = None
) -> Fraction:
    """Exhaustive minimum over all aligned permit subsets; cross-check oracle.

    Only usable when there are few candidate permits (<= ~16).
    """
    days = sorted(set(rainy))
    if not days:
        return Fraction(0)
    if horizon is None:
        horizon = max(days) + 1
    candidates = []
    for lt in catalog:
        starts = sorted({slot_start(t, lt.duration) for t in days})
        candidates.extend((lt.index, s, lt.cost, lt.duration) for s in starts)
    if len(candidates) > 16:
        raise ValueError(f"{len(candidates)} candidate permits is too many to enumerate")
    best = None
    for mask in range(1 << len(candidates)):
        chosen = [candidates[i] for i in range(len(candidates)) if mask >> i & 1]
        cost = sum((c for _, _, c, _ in chosen), Fraction(0))
        if best is not None and cost >= best:
            continue
        if all(any(s <= t < s + d for _, s, _, d in chosen) for t in days):
            best = cost
    assert best is not None  # buying everything always covers
    return best
