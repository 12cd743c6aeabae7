"""Price vectors and pricing solutions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .valuation import GroundSet, Item

# Relative slack below which two profits count as tied when picking the best
# candidate; without it, tie-breaking rules would be decided by rounding noise.
TIE_RTOL = 1e-12


def improves(candidate: float, incumbent: float) -> bool:
    return candidate > incumbent + TIE_RTOL * max(1.0, abs(incumbent))


class PriceVector:
    """Nonnegative per-item prices; +inf marks items that are effectively withheld."""

    def __init__(self, ground: GroundSet, prices: Iterable[float]):
        arr = np.array(list(prices) if not isinstance(prices, np.ndarray) else prices, dtype=float)
        if arr.shape != (len(ground),):
            raise ValueError("need exactly one price per item")
        if np.any(np.isnan(arr)) or np.any(arr < 0):
            raise ValueError("prices must be nonnegative")
        self.ground = ground
        self.values = arr

    @classmethod
    def withheld(cls, ground: GroundSet) -> "PriceVector":
        return cls(ground, np.full(len(ground), np.inf))

    @classmethod
    def from_dict(cls, ground: GroundSet, prices: dict) -> "PriceVector":
        arr = np.full(len(ground), np.inf)
        for item, price in prices.items():
            arr[ground.index(item)] = price
        return cls(ground, arr)

    def __getitem__(self, item: Item) -> float:
        return float(self.values[self.ground.index(item)])

    def total(self, items: Iterable[Item]) -> float:
        idx = [self.ground.index(x) for x in items]
        return float(np.sum(self.values[idx])) if idx else 0.0

    def total_mask(self, mask: int) -> float:
        total = 0.0
        k = 0
        while mask:
            if mask & 1:
                total += self.values[k]
            mask >>= 1
            k += 1
        return float(total)

    def to_dict(self) -> dict:
        return {
            str(item): ("inf" if math.isinf(p) else float(p))
            for item, p in zip(self.ground.items, self.values)
        }

    def __repr__(self) -> str:
        return f"PriceVector({self.to_dict()})"


@dataclass
class PricingSolution:
    """A price vector with an assignment.

    ``assignment`` is a frozenset for a single (or aggregated) buyer and a tuple
    of frozensets, one per buyer, for independent buyers.
    """

    prices: PriceVector
    assignment: frozenset | tuple
    profit: float
    s: int
    alpha: float | None = 1.0
    info: dict = field(default_factory=dict)

    @property
    def is_multi(self) -> bool:
        return isinstance(self.assignment, tuple)

    @property
    def items(self) -> frozenset:
        if self.is_multi:
            return frozenset().union(*self.assignment)
        return self.assignment

    def to_dict(self) -> dict:
        ground = self.prices.ground
        if self.is_multi:
            assignment = [ground.ordered(part) for part in self.assignment]
        else:
            assignment = ground.ordered(self.assignment)
        return {
            "prices": self.prices.to_dict(),
            "assignment": assignment,
            "profit": float(self.profit),
            "s": int(self.s),
            "alpha": None if self.alpha is None else float(self.alpha),
        }
