"""Pricing for several independent buyers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .single import ranked_items
from .solution import PriceVector, PricingSolution, improves
from .valuation import GroundSet, Item, Valuation, mask_to_bool

ATTAIN_RTOL = 1e-9


class UnsupportedConfigurationError(ValueError):
    pass


class AttainmentError(RuntimeError):
    pass


@dataclass
class Buyer:
    valuation: Valuation
    budget: float = math.inf

    def __post_init__(self):
        if not self.budget >= 0:
            raise ValueError("budget must be nonnegative")


@dataclass
class Instance:
    """Buyers over a shared ground set. ``mode`` is "independent" or "collaborating"."""

    ground: GroundSet
    buyers: list[Buyer]
    mode: str = "independent"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.buyers:
            raise ValueError("instance needs at least one buyer")
        for b in self.buyers:
            if b.valuation.ground != self.ground:
                raise ValueError("all valuations must share the instance ground set")
        if self.mode not in ("independent", "collaborating"):
            raise ValueError(f"unknown mode {self.mode!r}")

    @classmethod
    def of(cls, valuations: Sequence[Valuation], budgets=None, mode: str = "independent") -> "Instance":
        budgets = budgets if budgets is not None else [math.inf] * len(valuations)
        buyers = [Buyer(v, b) for v, b in zip(valuations, budgets)]
        return cls(valuations[0].ground, buyers, mode)

    @property
    def valuations(self) -> list[Valuation]:
        return [b.valuation for b in self.buyers]

    @property
    def budgets(self) -> list[float]:
        return [b.budget for b in self.buyers]

    @property
    def n(self) -> int:
        return len(self.buyers)


def _marginal_matrix(valuations: Sequence[Valuation], mask: int) -> np.ndarray:
    return np.vstack([v.marginals(mask) for v in valuations])


def _partition(marg: np.ndarray, prices: np.ndarray, selected: np.ndarray) -> np.ndarray:
    """Owner index per item: lowest buyer whose marginal attains the price."""
    owner = np.full(marg.shape[1], -1)
    for k in np.flatnonzero(selected):
        tol = ATTAIN_RTOL * max(1.0, abs(prices[k]))
        hits = np.flatnonzero(marg[:, k] >= prices[k] - tol)
        if hits.size == 0:
            raise AttainmentError(
                f"no buyer attains price {prices[k]!r} for item {k}; marginals {marg[:, k].tolist()}"
            )
        owner[k] = hits[0]
    return owner


def partition_assignment(inst: Instance, X: Iterable[Item], p: PriceVector) -> tuple:
    """Split X among buyers so each item goes to a buyer whose marginal in X equals its price."""
    mask = inst.ground.mask(X)
    selected = mask_to_bool(mask, len(inst.ground))
    owner = _partition(_marginal_matrix(inst.valuations, mask), p.values, selected)
    return tuple(
        frozenset(inst.ground.items[k] for k in np.flatnonzero(owner == i)) for i in range(inst.n)
    )


def _stability_ratio(inst: Instance, mask: int, selected: np.ndarray, marg: np.ndarray) -> float:
    # min over buyers and sold items of marginal / singleton value; each buyer is
    # at least this-stable by the diminishing-returns argument, and it is >= 1 - kappa(s)
    alpha = 1.0
    for i, v in enumerate(inst.valuations):
        single = v.singletons()
        pos = selected & (single > 0)
        if pos.any():
            alpha = min(alpha, float(np.min(marg[i, pos] / single[pos])))
    return max(alpha, 0.0)


def solve_multi(inst: Instance) -> PricingSolution:
    """Sell the s items with the largest best-buyer value, each priced at the largest
    buyer marginal, for the best s.

    The result is (1 - kappa(s))-stable. ``alpha`` reports a certified stability
    level computed from the marginals, which is never below 1 - kappa(s).
    """
    if any(math.isfinite(b) for b in inst.budgets):
        raise UnsupportedConfigurationError(
            "independent buyers with finite budgets are not supported"
        )
    n_items = len(inst.ground)
    singles = np.vstack([v.singletons() for v in inst.valuations])
    order = ranked_items(singles.max(axis=0))

    best_profit, best_s, best_mask = 0.0, 0, 0
    mask = 0
    for s, k in enumerate(order, start=1):
        mask |= 1 << k
        marg = _marginal_matrix(inst.valuations, mask)
        profit = float(np.sum(np.maximum(marg.max(axis=0), 0.0)))
        if improves(profit, best_profit):
            best_profit, best_s, best_mask = profit, s, mask

    prices = np.full(n_items, np.inf)
    selected = mask_to_bool(best_mask, n_items)
    if best_mask:
        marg = _marginal_matrix(inst.valuations, best_mask)
        prices[selected] = np.maximum(marg.max(axis=0)[selected], 0.0)
        owner = _partition(marg, prices, selected)
        alpha = _stability_ratio(inst, best_mask, selected, marg)
    else:
        owner = np.full(n_items, -1)
        alpha = 1.0
    parts = tuple(
        frozenset(inst.ground.items[k] for k in np.flatnonzero(owner == i)) for i in range(inst.n)
    )
    profit = float(np.sum(prices[selected])) if best_mask else 0.0
    return PricingSolution(
        PriceVector(inst.ground, prices), parts, profit, best_s, alpha, {"algorithm": "proposed"}
    )
