"""Pricing for a single buyer."""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .solution import PriceVector, PricingSolution, improves
from .valuation import (
    CapacityError,
    Item,
    Valuation,
    mask_to_bool,
    profit_potential_table,
)

MAX_BRUTE_FORCE_ITEMS = 20


def ranked_items(values: np.ndarray) -> list[int]:
    """Indices with positive value, by decreasing value then ground order."""
    order = sorted(range(len(values)), key=lambda k: (-values[k], k))
    return [k for k in order if values[k] > 0]


def price_for_assignment(f: Valuation, X: Iterable[Item]) -> PriceVector:
    """Optimal stable prices for selling exactly X: removal marginals on X, +inf elsewhere."""
    mask = f.ground.mask(X)
    prices = np.full(f.n, np.inf)
    marg = f.marginals(mask)
    for k in range(f.n):
        if mask >> k & 1:
            prices[k] = max(marg[k], 0.0)
    return PriceVector(f.ground, prices)


def _solution_for_mask(f: Valuation, mask: int, s: int) -> PricingSolution:
    prices = np.full(f.n, np.inf)
    marg = f.marginals(mask)
    selected = mask_to_bool(mask, f.n)
    prices[selected] = np.maximum(marg[selected], 0.0)
    profit = float(np.sum(prices[selected]))
    return PricingSolution(PriceVector(f.ground, prices), f.ground.subset(mask), profit, s)


def solve_single(f: Valuation) -> PricingSolution:
    """Sell the s most valuable items at their removal-marginal prices, for the best s.

    Stable for submodular f, and within a factor 1 - kappa(|X*|) of the optimal
    profit. Ties between values of s go to the smaller s.
    """
    order = ranked_items(f.singletons())
    best = PricingSolution(PriceVector.withheld(f.ground), frozenset(), 0.0, 0)
    mask = 0
    for s, k in enumerate(order, start=1):
        mask |= 1 << k
        profit = float(np.sum(np.maximum(f.marginals(mask), 0.0)))
        if improves(profit, best.profit):
            best = _solution_for_mask(f, mask, s)
    best.info["algorithm"] = "proposed"
    return best


def discount_to_budget(sol: PricingSolution, budget: float) -> PricingSolution:
    """Scale the prices of the sold items down proportionally so their total is the budget."""
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    if sol.profit <= budget:
        sol.info["budget"] = budget
        return sol
    ground = sol.prices.ground
    mask = ground.mask(sol.items)
    prices = sol.prices.values.copy()
    selected = mask_to_bool(mask, len(ground))
    prices[selected] *= budget / sol.profit
    discounted = PricingSolution(
        PriceVector(ground, prices),
        sol.assignment,
        float(np.sum(prices[selected])),
        sol.s,
        sol.alpha,
        dict(sol.info, budget=budget, discounted_from=sol.profit),
    )
    return discounted


def solve_single_budgeted(f: Valuation, budget: float) -> PricingSolution:
    return discount_to_budget(solve_single(f), budget)


def brute_force_single(f: Valuation) -> PricingSolution:
    """Exact single-buyer optimum by maximizing the profit potential over all subsets."""
    if f.n > MAX_BRUTE_FORCE_ITEMS:
        raise CapacityError(f"brute force supports at most {MAX_BRUTE_FORCE_ITEMS} items")
    h = profit_potential_table(f.table(), f.n)
    mask = int(np.argmax(h))
    sol = _solution_for_mask(f, mask, bin(mask).count("1"))
    sol.info["algorithm"] = "bruteforce"
    return sol
