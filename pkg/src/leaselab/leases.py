"""Lease catalogs and slot-aligned triplets under the interval model.

Leases of duration d may only start at multiples of d, durations are powers
of two, and longer leases cost no more per unit of time. A purchase is a
triplet (node, lease index, aligned start) active on the half-open window
[start, start + duration).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Tuple, Union

CostLike = Union[int, str, float, Fraction]


class CatalogError(ValueError):
    """A lease catalog violates an invariant; ``index`` is the 1-based offender."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class EmptyCatalog(CatalogError):
    pass


class NonPowerOfTwoDuration(CatalogError):
    pass


class EconomyOfScaleViolated(CatalogError):
    pass


class DuplicateDuration(CatalogError):
    pass


class NonPositiveCost(CatalogError):
    pass


def as_cost(value: CostLike) -> Fraction:
    """Parse a cost into an exact rational.

    Floats are read through their decimal repr, so 1.5 from a JSON file
    means exactly 3/2.
    """
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


class Triplet(NamedTuple):
    """One purchasable unit: node leased with catalog index ``lease`` from ``start``."""

    node: int
    lease: int
    start: int


@dataclass(frozen=True)
class LeaseType:
    index: int  # 1-based, sorted by duration ascending
    duration: int
    cost: Fraction


@dataclass(frozen=True)
class LeaseCatalog:
    types: Tuple[LeaseType, ...]

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[int, CostLike]]) -> "LeaseCatalog":
        """Build a validated catalog from (duration, cost) pairs, sorted by duration."""
        ordered = sorted(((int(d), as_cost(c)) for d, c in pairs), key=lambda p: p[0])
        catalog = cls(
            types=tuple(
                LeaseType(index=i + 1, duration=d, cost=c)
                for i, (d, c) in enumerate(ordered)
            )
        )
        validate_catalog(catalog)
        return catalog

    def __len__(self) -> int:
        return len(self.types)

    def __iter__(self) -> Iterator[LeaseType]:
        return iter(self.types)

    def type_at(self, index: int) -> LeaseType:
        """Lease type for a 1-based catalog index."""
        return self.types[index - 1]

    def duration(self, index: int) -> int:
        return self.types[index - 1].duration

    def cost(self, index: int) -> Fraction:
        return self.types[index - 1].cost

    def max_duration(self) -> int:
        return self.types[-1].duration

    def slot(self, t: int, index: int) -> int:
        return slot_start(t, self.types[index - 1].duration)

    def triplet_at(self, node: int, index: int, t: int) -> Triplet:
        """The unique triplet of this lease type on ``node`` whose window contains ``t``."""
        return Triplet(node, index, self.slot(t, index))

    def is_active(self, tr: Triplet, t: int) -> bool:
        return is_active(tr, t, self)


def slot_start(t: int, duration: int) -> int:
    """Largest aligned start s <= t with s ≡ 0 (mod duration)."""
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    return t - t % duration


def is_active(tr: Triplet, t: int, catalog: LeaseCatalog) -> bool:
    """True iff start <= t < start + duration (half-open window)."""
    return tr.start <= t < tr.start + catalog.duration(tr.lease)


def validate_catalog(catalog: LeaseCatalog) -> None:
    """Raise a CatalogError naming the first offending 1-based index."""
    types = catalog.types
    if not types:
        raise EmptyCatalog("catalog has no lease types")
    for lt in types:
        if lt.duration < 1 or lt.duration & (lt.duration - 1):
            raise NonPowerOfTwoDuration(
                f"lease {lt.index} has duration {lt.duration}", index=lt.index
            )
        if lt.cost <= 0:
            # the multiplicative weight rule divides by the cost
            raise NonPositiveCost(
                f"lease {lt.index} has cost {lt.cost}", index=lt.index
            )
    for prev, cur in zip(types, types[1:]):
        if cur.duration == prev.duration:
            raise DuplicateDuration(
                f"leases {prev.index} and {cur.index} share duration {cur.duration}",
                index=cur.index,
            )
        if cur.cost < prev.cost:
            raise EconomyOfScaleViolated(
                f"lease {cur.index} costs less than lease {prev.index}",
                index=cur.index,
            )
        if cur.cost * prev.duration > prev.cost * cur.duration:
            raise EconomyOfScaleViolated(
                f"lease {cur.index} has higher per-unit cost than lease {prev.index}",
                index=cur.index,
            )
